#pragma once

#include "dts/dirac.hpp"
#include "dts/toeplitz.hpp"

namespace dts {

/// c(lambda, mu) = lambda mu / (1 + lambda mu); DegeneratePair when 1 + lambda mu = 0.
Complex c_factor(Complex lambda, Complex mu);
/// q(lambda) = |lambda|^2 / (|lambda|^2 + 1), equal to c(lambda, conj lambda).
double q_weight(Complex lambda);

/// Relative Frobenius residual of the Christoffel-Darboux identity
///   sum_{k=0}^N c^k W_k(conj mu)* C_k W_k(lambda)
///     = i (1 + lambda mu) / (mu - lambda) (c^{N+1} W_{N+1}(conj mu)* j W_{N+1}(lambda) - j).
/// Needs N + 1 potential blocks.
double cd_residual(const Potential& pot, Complex lambda, Complex mu, Index n);

/// R(lambda, mu) = Phi1* (I + lambda A*)^{-1} S^{-1} (I + mu A)^{-1} Phi1 at the order of t.
CMatrix eval_r(const ToeplitzSystem& t, Complex lambda, Complex mu);

/// M(k, zeta, xi) = frakA_k(zeta) J frakA_k(conj xi)*. The second argument is conjugated
/// inside, so comparisons against limits use omega(xi)*.
struct KernelPoint {
  Index k = 0;
  Complex zeta;
  Complex xi;
  CMatrix m;                  // 2p x 2p
  double product_residual = 0.0;  // relative gap to the frakA product form
  bool near_excluded = false;     // zeta or xi within tol.proximity of 2i

  Index p() const { return m.rows() / 2; }
  CMatrix m11() const { return m.topLeftCorner(p(), p()); }
  CMatrix m12() const { return m.topRightCorner(p(), p()); }
  CMatrix m21() const { return m.bottomLeftCorner(p(), p()); }
  CMatrix m22() const { return m.bottomRightCorner(p(), p()); }
};

/// Evaluates through J + i(xi - zeta) J j Pi* (I + zeta A*)^{-1} S^{-1} (I + xi A)^{-1} Pi j J
/// on the leading order-k system, and records the gap to the product form.
KernelPoint eval_m(const ToeplitzSystem& t, Index k, Complex zeta, Complex xi,
                   const Tolerances& tol = {});

/// The product form frakA_k(zeta) J frakA_k(conj xi)* alone.
CMatrix eval_m_product(const ToeplitzSystem& t, Index k, Complex zeta, Complex xi);

/// Weyl disk of order N at zeta in the upper half-plane:
///   Lambda_l^2 = i (zeta - conj zeta)^{-1} R(conj zeta, zeta)^{-1},
///   Lambda_r^2 = i (zeta - conj zeta)^{-1} R(zeta, conj zeta)^{-1},
///   F = J M(N, conj zeta, zeta) J,  center = i Lambda_l^2 F_12.
struct WeylDisk {
  Index n = 0;
  Complex zeta;
  CMatrix lambda_l;
  CMatrix lambda_r;
  CMatrix lambda_l_sq;
  CMatrix lambda_r_sq;
  CMatrix center;
  CMatrix f;  // 2p x 2p
  bool near_excluded = false;

  /// u = Lambda_l^{-1} (omega - center) Lambda_r^{-1}.
  CMatrix contraction(const CMatrix& omega) const;
  /// ||u||_2 <= 1 + tol.membership.
  bool contains(const CMatrix& omega, const Tolerances& tol = {}) const;
};

WeylDisk weyl_disk(const ToeplitzSystem& t, Complex zeta, const Tolerances& tol = {});

}  // namespace dts
