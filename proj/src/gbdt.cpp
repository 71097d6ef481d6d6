#include "dts/gbdt.hpp"

#include <cmath>
#include <sstream>

namespace dts {

namespace {

CMatrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index k = 0; k < cols; ++k) m(i, k) = Complex(dist(rng), dist(rng));
  }
  return m;
}

}  // namespace

CMatrix AdmissibleTriple::pi0() const {
  CMatrix out(n(), 2 * p());
  out << theta1_, theta2_;
  return out;
}

AdmissibleTriple validate_triple(CMatrix a, CMatrix s0, CMatrix theta1, CMatrix theta2,
                                 const Tolerances& tol) {
  require_square(a, "A");
  const Index n = a.rows();
  if (s0.rows() != n || s0.cols() != n) throw Error(Errc::ShapeMismatch, "S0 must be n x n");
  if (theta1.rows() != n || theta2.rows() != n || theta1.cols() != theta2.cols() ||
      theta1.cols() < 1) {
    throw Error(Errc::ShapeMismatch, "theta1 and theta2 must both be n x p");
  }
  for (const CMatrix* m : {&a, &s0, &theta1, &theta2}) require_finite(*m, "triple entry");
  try {
    (void)cholesky_pd(s0, tol);
  } catch (const Error& e) {
    throw Error(Errc::S0NotPD, std::string("S0 is not positive definite: ") + e.what());
  }
  {
    Eigen::PartialPivLU<CMatrix> lu(a);
    const double scale = a.norm();
    for (Index i = 0; i < n; ++i) {
      if (!(std::abs(lu.matrixLU()(i, i)) > tol.singular_pivot * scale)) {
        throw Error(Errc::SingularA, "A is singular", i);
      }
    }
  }
  const Index p = theta1.cols();
  const auto sig = SignatureConstants::make(p);
  CMatrix pi(n, 2 * p);
  pi << theta1, theta2;
  const CMatrix r = a * s0 - s0 * a.adjoint() - kI * pi * sig.j * pi.adjoint();
  const double res = r.norm() / (a.norm() * s0.norm());
  if (!(res <= tol.triple)) {
    std::ostringstream os;
    os << "A S0 - S0 A* - i Pi0 j Pi0* has relative residual " << res;
    throw Error(Errc::IdentityResidualTooLarge, os.str(), std::nullopt, res);
  }
  AdmissibleTriple t;
  t.a_ = std::move(a);
  t.s0_ = real_part(s0);
  t.theta1_ = std::move(theta1);
  t.theta2_ = std::move(theta2);
  t.residual_ = res;
  return t;
}

RationalWeyl::RationalWeyl(const AdmissibleTriple& t)
    : a_(t.a()), s0_(t.s0()), theta1_(t.theta1()), theta2_(t.theta2()) {
  const HermitianPD s0 = cholesky_pd(s0_);
  // S0 is Hermitian, so (theta* S0^{-1})* = S0^{-1} theta.
  s0_inv_theta1_adj_ = s0.solve(theta1_).adjoint();
  const CMatrix d_adj = s0.solve(theta2_ - theta1_).adjoint();  // (theta2 - theta1)* S0^{-1}
  at_ = a_ + kI * theta2_ * d_adj;
}

CMatrix RationalWeyl::phi(Complex lambda) const {
  const CMatrix shifted = at_ - lambda * identity(n());
  CMatrix x;
  try {
    x = solve(shifted, theta2_);
  } catch (const Error&) {
    throw Error(Errc::LambdaInSpectrum, "lambda lies in the spectrum of At");
  }
  return -kI * (identity(p()) + 2.0 * kI * s0_inv_theta1_adj_ * x);
}

// phi = -i (I - f)(I + f)^{-1},  f = -i theta1* S0^{-1} (Ax - lambda)^{-1} theta2,
// Ax = A + i theta2 theta2* S0^{-1}.
CMatrix RationalWeyl::phi_unsimplified(Complex lambda) const {
  const HermitianPD s0 = cholesky_pd(s0_);
  const CMatrix ax = a_ + kI * theta2_ * s0.solve(theta2_).adjoint();
  CMatrix res;
  try {
    res = solve(ax - lambda * identity(n()), theta2_);
  } catch (const Error&) {
    throw Error(Errc::LambdaInSpectrum, "lambda lies in the spectrum of A + i theta2 theta2* S0^{-1}");
  }
  const CMatrix f = -kI * s0_inv_theta1_adj_ * res;
  const CMatrix id = identity(p());
  return -kI * solve((id + f).transpose(), (id - f).transpose()).transpose();
}

CMatrix RationalWeyl::omega(Complex zeta) const {
  // -phi(2/zeta) = i (I + 2i theta1* S0^{-1} zeta (zeta At - 2)^{-1} theta2).
  const CMatrix m = zeta * at_ - 2.0 * identity(n());
  CMatrix x;
  try {
    x = solve(m, theta2_);
  } catch (const Error&) {
    throw Error(Errc::LambdaInSpectrum, "2/zeta lies in the spectrum of At");
  }
  return kI * (identity(p()) + 2.0 * kI * zeta * s0_inv_theta1_adj_ * x);
}

double RationalWeyl::identity_residual() const {
  const CMatrix d = theta1_ - theta2_;
  const CMatrix r = at_ * s0_ - s0_ * at_.adjoint() - kI * d * d.adjoint();
  return r.norm() / (at_.norm() * s0_.norm());
}

CVector RationalWeyl::spectrum() const { return eigenvalues(at_); }

CMatrix gbdt_weyl(const AdmissibleTriple& t, Complex lambda) { return RationalWeyl(t).phi(lambda); }

MomentData gbdt_moments(const AdmissibleTriple& t, Index k) {
  if (k < 0) throw Error(Errc::InvalidArgument, "moment count must be non-negative");
  const RationalWeyl rw(t);
  const Index p = t.p();
  const Index n = t.n();
  const CMatrix id = identity(n);
  const CMatrix plus_inv = inverse(rw.a_tilde() + kI * id);
  const CMatrix u = (rw.a_tilde() - kI * id) * plus_inv;
  const HermitianPD s0 = cholesky_pd(t.s0());
  const CMatrix f = 2.0 * kI * s0.solve(t.theta1()).adjoint() * plus_inv;
  const CMatrix alpha0 = identity(p) + f * t.theta2();

  MomentData m;
  m.p = p;
  m.nu = imag_part(alpha0);
  m.s.reserve(static_cast<std::size_t>(k) + 1);
  m.s.push_back(alpha0 + alpha0.adjoint());
  CMatrix fu = f;  // F U^{k-1}
  const CMatrix g = (u - id) * t.theta2();
  for (Index i = 1; i <= k; ++i) {
    m.s.push_back(fu * g);
    fu = fu * u;
  }
  return m;
}

SemiseparableGenerators semiseparable_generators(const AdmissibleTriple& t) {
  const RationalWeyl rw(t);
  const Index n = t.n();
  const CMatrix id = identity(n);
  CMatrix plus_inv;
  try {
    plus_inv = inverse(rw.a_tilde() + kI * id);
  } catch (const Error&) {
    throw Error(Errc::CayleySingular, "-i is an eigenvalue of At");
  }
  SemiseparableGenerators gen;
  gen.u = (rw.a_tilde() - kI * id) * plus_inv;
  Eigen::PartialPivLU<CMatrix> lu(gen.u);
  for (Index i = 0; i < n; ++i) {
    if (std::abs(lu.matrixLU()(i, i)) < 1e-12 * std::max(gen.u.norm(), 1.0)) {
      throw Error(Errc::CayleySingular, "i is an eigenvalue of At, U is singular");
    }
  }
  const HermitianPD s0 = cholesky_pd(t.s0());
  gen.f = 2.0 * kI * s0.solve(t.theta1()).adjoint() * plus_inv;
  gen.g = (gen.u - id) * t.theta2();
  return gen;
}

AdmissibleTriple trivial_triple(Index n, Index p) {
  return validate_triple(identity(n), identity(n), CMatrix::Zero(n, p), CMatrix::Zero(n, p));
}

AdmissibleTriple example_triple() {
  CMatrix a(1, 1), s0(1, 1), t1(1, 1), t2(1, 1);
  a(0, 0) = kI;
  s0(0, 0) = 1.0;
  t1(0, 0) = std::sqrt(3.0);
  t2(0, 0) = 1.0;
  return validate_triple(a, s0, t1, t2);
}

AdmissibleTriple random_triple(std::mt19937_64& rng, Index n, Index p) {
  const auto sig = SignatureConstants::make(p);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const CMatrix m = random_matrix(rng, n, n);
    const CMatrix s0 = real_part(m * m.adjoint() + 0.5 * identity(n));
    const CMatrix t1 = random_matrix(rng, n, p);
    const CMatrix t2 = random_matrix(rng, n, p);
    const CMatrix h = real_part(random_matrix(rng, n, n));
    CMatrix pi(n, 2 * p);
    pi << t1, t2;
    const HermitianPD s0f = cholesky_pd(s0);
    // X S0^{-1} = (S0^{-1} X*)* for any X.
    const CMatrix a =
        s0f.solve(h).adjoint() + 0.5 * kI * s0f.solve(pi * sig.j * pi.adjoint()).adjoint();
    if (eigenvalues(a).cwiseAbs().minCoeff() < 0.5) continue;
    const CMatrix at = a + kI * t2 * s0f.solve(t2 - t1).adjoint();
    const CVector ev = eigenvalues(at);
    if (ev.imag().minCoeff() <= 0.05) continue;
    if ((ev.array() - kI).abs().minCoeff() <= 0.1) continue;
    try {
      return validate_triple(a, s0, t1, t2);
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(Errc::InvalidArgument, "random_triple: rejection sampling did not terminate");
}

}  // namespace dts
