#include "dts/inverse.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace dts {

namespace {

Index next_pow2(Index v) {
  Index out = 1;
  while (out < v) out <<= 1;
  return out;
}

struct Coefficients {
  std::vector<CMatrix> c;  // alpha_0..alpha_K
};

Coefficients taylor_on_circle(const MatrixFunction& phi, Index k, double r, Index samples,
                              Index p) {
  std::vector<CMatrix> vals;
  vals.reserve(static_cast<std::size_t>(samples));
  for (Index m = 0; m < samples; ++m) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(samples);
    const Complex z = std::polar(r, theta);
    const Complex lambda = kI * (z + 1.0) / (z - 1.0);
    CMatrix v;
    try {
      v = phi(lambda);
    } catch (const std::exception& e) {
      throw Error(Errc::EvaluatorFailure, std::string("Weyl function evaluator failed: ") + e.what(),
                  m);
    }
    if (v.rows() != p || v.cols() != p) {
      throw Error(Errc::ShapeMismatch, "Weyl function evaluator must return p x p");
    }
    if (!v.allFinite()) throw Error(Errc::EvaluatorFailure, "Weyl function returned non-finite", m);
    vals.push_back(kI * v);
  }
  Coefficients out;
  for (Index d = 0; d <= k; ++d) {
    CMatrix acc = CMatrix::Zero(p, p);
    for (Index m = 0; m < samples; ++m) {
      const double theta =
          -2.0 * std::numbers::pi * static_cast<double>(d * m % samples) / static_cast<double>(samples);
      acc += std::polar(1.0, theta) * vals[static_cast<std::size_t>(m)];
    }
    out.c.push_back(acc / (static_cast<double>(samples) * std::pow(r, static_cast<double>(d))));
  }
  return out;
}

}  // namespace

RecoveryReport recover_potential(const MomentData& m, Index n, std::array<Complex, 2> probes,
                                 const Tolerances& tol) {
  if (n < 0) throw Error(Errc::InvalidArgument, "N must be non-negative");
  validate_moments(m, tol);
  if (m.count() < n + 1) {
    throw Error(Errc::InsufficientMoments,
                "recovering C_0..C_" + std::to_string(n) + " needs s_0..s_-" + std::to_string(n));
  }
  for (const Complex lam : probes) {
    if (std::abs(lam) < 1e-12 || std::abs(lam - kI) < 1e-12 || std::abs(lam + kI) < 1e-12) {
      throw Error(Errc::LambdaAtSingularity, "probe lies in the singular set {0, i, -i}");
    }
  }
  const Index p = m.p;
  const auto sig = SignatureConstants::make(p);
  const ToeplitzSystem full = assemble(m, n + 1, tol);

  RecoveryReport rep;
  rep.probes = probes;
  std::array<CMatrix, 2> w_prev{identity(2 * p), identity(2 * p)};
  std::vector<CMatrix> blocks;

  for (Index k = 1; k <= n + 1; ++k) {
    const ToeplitzSystem sys = full.leading(k);
    if (!sys.positive()) {
      rep.stopped_at = k - 1;
      std::ostringstream os;
      os << "S(" << k << ") is not positive definite; C_" << k - 1 << " onwards not recovered";
      rep.diagnostic = os.str();
      break;
    }
    std::array<CMatrix, 2> w_next;
    std::array<CMatrix, 2> ck;
    for (int q = 0; q < 2; ++q) {
      w_next[q] = fundamental_from_moments(sys, probes[q]);
      try {
        const CMatrix step =
            solve(w_prev[q].adjoint(), w_next[q].adjoint(), &rep.warnings, tol).adjoint();
        ck[q] = -kI * probes[q] * sig.j * (identity(2 * p) - step);
      } catch (const Error& e) {
        if (e.code() != Errc::Singular) throw;
        throw Error(Errc::SingularW, "W_" + std::to_string(k - 1) + " is singular at the probe",
                    k - 1);
      }
    }
    const CMatrix c = real_part(ck[0]);
    rep.probe_residuals.push_back(rel_diff(ck[1], ck[0]));
    rep.unitarity_residuals.push_back(j_unitarity_residual(c));
    blocks.push_back(c);
    w_prev = w_next;
  }
  try {
    rep.potential = validate_potential(p, blocks, tol);
  } catch (const Error& e) {
    // Keep the prefix that passed so callers see how far the recovery got.
    const Index bad = e.index().value_or(0);
    blocks.resize(static_cast<std::size_t>(bad));
    rep.probe_residuals.resize(static_cast<std::size_t>(bad));
    rep.unitarity_residuals.resize(static_cast<std::size_t>(bad));
    rep.stopped_at = bad;
    rep.diagnostic = std::string("recovered block failed validation: ") + e.what();
    rep.potential = validate_potential(p, std::move(blocks), tol);
  }
  return rep;
}

TaylorResult weyl_to_moments(const MatrixFunction& phi, Index k, const TaylorOptions& opts,
                             const Tolerances& tol) {
  if (k < 0) throw Error(Errc::InvalidArgument, "K must be non-negative");
  if (!(opts.radius > 0.0 && opts.radius < 1.0)) {
    throw Error(Errc::InvalidArgument, "radius must lie in (0, 1)");
  }
  CMatrix probe;
  try {
    probe = phi(-kI);
  } catch (const std::exception& e) {
    throw Error(Errc::EvaluatorFailure, std::string("Weyl function evaluator failed: ") + e.what());
  }
  const Index p = probe.rows();
  if (p < 1 || probe.cols() != p) throw Error(Errc::ShapeMismatch, "phi must return p x p");

  const Index samples = opts.samples > 0 ? opts.samples : next_pow2(std::max<Index>(4 * k, 4));
  if (samples <= k) throw Error(Errc::InvalidArgument, "need more samples than coefficients");
  double r2 = opts.check_radius;
  if (r2 == 0.0) r2 = opts.radius >= 0.7 ? opts.radius - 0.2 : opts.radius + 0.2;
  if (!(r2 > 0.0 && r2 < 1.0) || r2 == opts.radius) {
    throw Error(Errc::InvalidArgument, "check radius must lie in (0, 1) and differ from radius");
  }

  const Coefficients a = taylor_on_circle(phi, k, opts.radius, samples, p);
  const Coefficients b = taylor_on_circle(phi, k, r2, samples, p);

  double scale = 0.0;
  for (const auto& c : a.c) scale = std::max(scale, c.norm());
  double worst = 0.0;
  for (std::size_t d = 0; d < a.c.size(); ++d) {
    worst = std::max(worst, (a.c[d] - b.c[d]).norm() / std::max(scale, 1e-300));
  }

  TaylorResult out;
  out.aliasing_estimate = worst;
  if (worst > tol.aliasing) {
    std::ostringstream os;
    os << "Taylor coefficients at radii " << opts.radius << " and " << r2 << " differ by " << worst;
    throw Error(Errc::AliasingDetected, os.str(), std::nullopt, worst);
  }
  out.moments.p = p;
  out.moments.nu = imag_part(a.c[0]);
  out.moments.s.push_back(2.0 * real_part(a.c[0]));
  for (Index d = 1; d <= k; ++d) out.moments.s.push_back(a.c[static_cast<std::size_t>(d)]);
  return out;
}

}  // namespace dts
