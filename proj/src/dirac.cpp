#include "dts/dirac.hpp"

#include <cmath>
#include <sstream>

namespace dts {

SignatureConstants SignatureConstants::make(Index p) {
  if (p < 1) throw Error(Errc::InvalidArgument, "block size p must be positive");
  SignatureConstants s;
  s.p = p;
  const CMatrix id = identity(p);
  s.j = CMatrix::Zero(2 * p, 2 * p);
  s.j.topLeftCorner(p, p) = id;
  s.j.bottomRightCorner(p, p) = -id;
  s.J = CMatrix::Zero(2 * p, 2 * p);
  s.J.topRightCorner(p, p) = id;
  s.J.bottomLeftCorner(p, p) = id;
  const double r = 1.0 / std::sqrt(2.0);
  s.K.resize(2 * p, 2 * p);
  s.K.topLeftCorner(p, p) = r * id;
  s.K.topRightCorner(p, p) = -r * id;
  s.K.bottomLeftCorner(p, p) = r * id;
  s.K.bottomRightCorner(p, p) = r * id;
  return s;
}

double j_unitarity_residual(const CMatrix& c) {
  const Index p = c.rows() / 2;
  const auto sig = SignatureConstants::make(p);
  return (c * sig.j * c - sig.j).norm() / sig.j.norm();
}

Potential validate_potential(Index p, std::vector<CMatrix> c, const Tolerances& tol) {
  if (p < 1) throw Error(Errc::InvalidArgument, "block size p must be positive");
  Potential pot;
  pot.p_ = p;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const auto idx = static_cast<std::int64_t>(k);
    if (c[k].rows() != 2 * p || c[k].cols() != 2 * p) {
      throw Error(Errc::ShapeMismatch, "C_" + std::to_string(k) + " is not 2p x 2p", idx);
    }
    require_finite(c[k], "potential block");
    try {
      (void)cholesky_pd(c[k], tol);
    } catch (const Error& e) {
      throw Error(Errc::NotPositiveDefinite,
                  "C_" + std::to_string(k) + " is not positive definite (" + e.what() + ")", idx);
    }
    const double res = j_unitarity_residual(c[k]);
    if (res > tol.potential) {
      std::ostringstream os;
      os << "C_" << k << " j C_" << k << " != j, residual " << res;
      throw Error(Errc::JUnitarityBroken, os.str(), idx, res);
    }
    pot.max_residual_ = std::max(pot.max_residual_, res);
  }
  pot.c_ = std::move(c);
  return pot;
}

Potential validate_potential(std::vector<CMatrix> c, const Tolerances& tol) {
  if (c.empty()) throw Error(Errc::InvalidArgument, "cannot infer p from an empty potential");
  const Index p = c.front().rows() / 2;
  return validate_potential(p, std::move(c), tol);
}

FundamentalSolution fundamental_solution(const Potential& pot, Complex lambda, Index n) {
  if (lambda == Complex(0.0)) throw Error(Errc::LambdaZero, "spectral parameter is zero");
  if (n < 0 || n > pot.size()) {
    throw Error(Errc::InvalidArgument, "requested more steps than the potential provides");
  }
  const auto sig = SignatureConstants::make(pot.p());
  FundamentalSolution fs;
  fs.lambda = lambda;
  fs.w.reserve(static_cast<std::size_t>(n) + 1);
  fs.w.push_back(identity(2 * pot.p()));
  const Complex factor = kI / lambda;
  for (Index k = 0; k < n; ++k) {
    // (I - f j C) W = W - f j (C W); j only flips the sign of the lower rows.
    CMatrix cw = pot[k] * fs.w.back();
    cw.bottomRows(pot.p()) *= -1.0;
    fs.w.push_back(fs.w.back() - factor * cw);
  }
  return fs;
}

CMatrix extract_potential_step(const CMatrix& w_k, const CMatrix& w_next, Complex lambda) {
  if (lambda == Complex(0.0)) throw Error(Errc::LambdaZero, "spectral parameter is zero");
  if (std::abs(lambda - kI) < 1e-12 || std::abs(lambda + kI) < 1e-12) {
    throw Error(Errc::LambdaAtSingularity, "det W_k vanishes at lambda = +-i");
  }
  require_square(w_k, "W_k");
  const Index p = w_k.rows() / 2;
  const auto sig = SignatureConstants::make(p);
  // X = W_{k+1} W_k^{-1}, obtained from X W_k = W_{k+1} by solving the adjoint system.
  const CMatrix step = solve(w_k.adjoint(), w_next.adjoint()).adjoint();
  return -kI * lambda * sig.j * (identity(2 * p) - step);
}

WeylSeriesDiagnostic weyl_series_partial_sums(const Potential& pot, const MatrixFunction& phi,
                                              Complex lambda, Index k) {
  if (!(lambda.imag() < 0.0)) {
    throw Error(Errc::LambdaNotInLowerHalfPlane, "Im lambda must be negative");
  }
  if (k < 0 || k >= pot.size()) {
    throw Error(Errc::InvalidArgument, "series length exceeds the potential");
  }
  const Index p = pot.p();
  const auto sig = SignatureConstants::make(p);
  const CMatrix ph = phi(lambda);
  if (ph.rows() != p || ph.cols() != p) {
    throw Error(Errc::ShapeMismatch, "Weyl function evaluator must return p x p");
  }
  CMatrix v(2 * p, p);
  v.topRows(p) = -kI * ph;
  v.bottomRows(p) = identity(p);
  const CMatrix kv = sig.K.adjoint() * v;
  const double l2 = std::norm(lambda);
  const double q = l2 / (l2 + 1.0);

  const auto fs = fundamental_solution(pot, lambda, k);
  WeylSeriesDiagnostic out;
  CMatrix sum = CMatrix::Zero(p, p);
  double qk = 1.0;
  double last_trace = 0.0;
  for (Index m = 0; m <= k; ++m) {
    const CMatrix wv = fs.w[static_cast<std::size_t>(m)] * kv;
    CMatrix term = qk * (wv.adjoint() * pot[m] * wv);
    term = real_part(term);
    last_trace = term.trace().real();
    sum += term;
    out.partial_sums.push_back(sum);
    out.traces.push_back(sum.trace().real());
    qk *= q;
  }
  const double total = out.traces.back();
  out.saturation_ratio = total > 0.0 ? last_trace / total : 0.0;
  return out;
}

}  // namespace dts
