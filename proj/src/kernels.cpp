#include "dts/kernels.hpp"

#include <cmath>

namespace dts {

namespace {

constexpr Complex kTwoI{0.0, 2.0};

const ToeplitzSystem& order(const ToeplitzSystem& t, Index k, ToeplitzSystem& storage) {
  if (k < 1 || k > t.blocks()) throw Error(Errc::InvalidArgument, "order k out of range");
  if (k == t.blocks()) return t;
  storage = t.leading(k);
  return storage;
}

// Pi* (I + zeta A*)^{-1} S^{-1} (I + xi A)^{-1} Pi for the columns in `cols`.
CMatrix sandwich(const ToeplitzSystem& t, Complex zeta, Complex xi, const CMatrix& cols) {
  const CMatrix right = t.solve_s(t.solve_i_plus_za(xi, cols));
  return cols.adjoint() * t.solve_i_plus_za_adj(zeta, right);
}

}  // namespace

Complex c_factor(Complex lambda, Complex mu) {
  const Complex d = 1.0 + lambda * mu;
  if (std::abs(d) < 1e-14) throw Error(Errc::DegeneratePair, "1 + lambda mu = 0");
  return lambda * mu / d;
}

double q_weight(Complex lambda) {
  const double l2 = std::norm(lambda);
  return l2 / (l2 + 1.0);
}

double cd_residual(const Potential& pot, Complex lambda, Complex mu, Index n) {
  if (lambda == mu) throw Error(Errc::EqualArguments, "lambda and mu must differ");
  if (lambda == Complex(0.0) || mu == Complex(0.0)) {
    throw Error(Errc::LambdaZero, "spectral parameters must be non-zero");
  }
  if (n < 0 || n + 1 > pot.size()) {
    throw Error(Errc::InvalidArgument, "CD identity at order N needs N + 1 potential blocks");
  }
  const Complex c = c_factor(lambda, mu);
  const auto sig = SignatureConstants::make(pot.p());
  const auto wl = fundamental_solution(pot, lambda, n + 1);
  const auto wm = fundamental_solution(pot, std::conj(mu), n + 1);

  CMatrix lhs = CMatrix::Zero(2 * pot.p(), 2 * pot.p());
  Complex ck = 1.0;
  for (Index k = 0; k <= n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    lhs += ck * (wm.w[i].adjoint() * pot[k] * wl.w[i]);
    ck *= c;
  }
  const auto last = static_cast<std::size_t>(n + 1);
  const CMatrix rhs = kI * (1.0 + lambda * mu) / (mu - lambda) *
                      (ck * (wm.w[last].adjoint() * sig.j * wl.w[last]) - sig.j);
  return rel_diff(lhs, rhs);
}

CMatrix eval_r(const ToeplitzSystem& t, Complex lambda, Complex mu) {
  return sandwich(t, lambda, mu, t.phi1());
}

CMatrix eval_m_product(const ToeplitzSystem& t, Index k, Complex zeta, Complex xi) {
  ToeplitzSystem storage;
  const ToeplitzSystem& s = order(t, k, storage);
  const auto sig = SignatureConstants::make(t.p());
  return frak_a(s, zeta) * sig.J * frak_a(s, std::conj(xi)).adjoint();
}

KernelPoint eval_m(const ToeplitzSystem& t, Index k, Complex zeta, Complex xi,
                   const Tolerances& tol) {
  ToeplitzSystem storage;
  const ToeplitzSystem& s = order(t, k, storage);
  const auto sig = SignatureConstants::make(t.p());
  KernelPoint kp;
  kp.k = k;
  kp.zeta = zeta;
  kp.xi = xi;
  const CMatrix z = sandwich(s, zeta, xi, s.pi());
  kp.m = sig.J + kI * (xi - zeta) * sig.J * sig.j * z * sig.j * sig.J;
  kp.product_residual = rel_diff(eval_m_product(s, k, zeta, xi), kp.m);
  kp.near_excluded =
      std::abs(zeta - kTwoI) < tol.proximity || std::abs(xi - kTwoI) < tol.proximity;
  return kp;
}

WeylDisk weyl_disk(const ToeplitzSystem& t, Complex zeta, const Tolerances& tol) {
  if (!(zeta.imag() > 0.0)) throw Error(Errc::NotInUpperHalfPlane, "zeta must satisfy Im zeta > 0");
  const Index p = t.p();
  const auto sig = SignatureConstants::make(p);
  const double scale = 1.0 / (2.0 * zeta.imag());  // i (zeta - conj zeta)^{-1}
  const Complex zb = std::conj(zeta);

  WeylDisk d;
  d.n = t.blocks();
  d.zeta = zeta;
  d.near_excluded = std::abs(zeta - kTwoI) < tol.proximity;

  // Z = Pi* (I + conj(zeta) A*)^{-1} S^{-1} (I + zeta A)^{-1} Pi; its (1,1) block is R(conj zeta, zeta).
  const CMatrix z = real_part(sandwich(t, zb, zeta, t.pi()));
  const CMatrix r_left = z.topLeftCorner(p, p);
  const CMatrix r_right = real_part(eval_r(t, zeta, zb));

  d.lambda_l_sq = real_part(scale * inverse(r_left));
  d.lambda_r_sq = real_part(scale * inverse(r_right));
  d.lambda_l = principal_sqrt_pd(cholesky_pd(d.lambda_l_sq, tol));
  d.lambda_r = principal_sqrt_pd(cholesky_pd(d.lambda_r_sq, tol));

  // J M(conj zeta, zeta) J = J + i (zeta - conj zeta) j Z j.
  d.f = sig.J - 2.0 * zeta.imag() * sig.j * z * sig.j;
  d.center = kI * d.lambda_l_sq * d.f.topRightCorner(p, p);
  return d;
}

CMatrix WeylDisk::contraction(const CMatrix& omega) const {
  const CMatrix left = solve(lambda_l, omega - center);
  return solve(lambda_r.adjoint(), left.adjoint()).adjoint();
}

bool WeylDisk::contains(const CMatrix& omega, const Tolerances& tol) const {
  return spectral_norm(contraction(omega)) <= 1.0 + tol.membership;
}

}  // namespace dts
