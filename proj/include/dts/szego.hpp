#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dts/dirac.hpp"
#include "dts/toeplitz.hpp"

namespace dts {

/// Real-line sampler t -> tau'(t).
using DensityFunction = std::function<CMatrix(double)>;

/// omega(zeta) = -phi(2 / zeta) for zeta in the upper half-plane.
MatrixFunction omega_from_phi(MatrixFunction phi);

/// phi(lambda) = -i (s_0/2 + i nu + sum_k s_{-k} z^k), z = (lambda + i)/(lambda - i),
/// truncated at the available moments.
MatrixFunction weyl_from_moments(const MomentData& m);

/// Smallest eigenvalue of Im omega over the given points (Herglotz spot check).
double herglotz_margin(const MatrixFunction& omega, const std::vector<Complex>& points);

/// tau'(t) = Im omega(t) / pi. RealPole when omega cannot be evaluated at t.
CMatrix boundary_density(const MatrixFunction& omega, double t);
DensityFunction density_from_omega(MatrixFunction omega);

/// The real-line grid t_m = -cot(theta_m / 2), theta_m = 2 pi (m + 1/2) / M, on which
/// dt / (1 + t^2) = d theta / 2.
std::vector<double> circle_nodes(Index samples);

/// integral of (1 + t^2)^{-1} ln det tau'(t) dt by the midpoint rule in theta.
/// QuadratureDivergence when the value is below -1e6 or a determinant is not positive.
double szego_integral(const DensityFunction& density, Index samples = 4096);

/// Scalar outer factor G with |G(t)|^2 = tau'(t), built on the unit disk from the
/// analytic completion of (1/2) log W(theta) and pulled back by z = (zeta - i)/(zeta + i).
class OuterFactor {
 public:
  Index samples() const { return static_cast<Index>(theta_.size()); }
  const std::vector<double>& theta() const { return theta_; }
  const std::vector<double>& nodes() const { return t_; }
  const std::vector<double>& log_w() const { return log_w_; }
  /// G at the real nodes.
  std::vector<Complex> boundary_values() const;
  /// max |G(t_m)|^2 / tau'(t_m) - 1 over the nodes.
  double boundary_error() const { return boundary_error_; }

  /// G(zeta) for zeta in the closed upper half-plane.
  Complex operator()(Complex zeta) const;
  Complex at_disk(Complex z) const;

 private:
  friend OuterFactor outer_factor_scalar(const DensityFunction& density, Index samples,
                                         const Tolerances& tol);
  std::vector<double> theta_, t_, log_w_;
  std::vector<Complex> coeff_;  // c_0, 2 c_1, 2 c_2, ...
  double boundary_error_ = 0.0;
};

/// p = 1 only. Errors: DensityNotPositive, GridTooCoarse (boundary error above
/// tol.factorization).
OuterFactor outer_factor_scalar(const DensityFunction& density, Index samples = 4096,
                                const Tolerances& tol = {});

/// (1/2 pi) [-i omega(zeta); 1] G(zeta)^{-1} conj(G(xi))^{-1} [i conj(omega(xi)), 1].
CMatrix asymptotic_target(const MatrixFunction& omega, const OuterFactor& g, Complex zeta,
                          Complex xi);

struct ConvergenceRow {
  Index k = 0;
  CMatrix m;                 // M(k, zeta, conj xi)
  double m_error = 0.0;      // ||M - target||_F, NaN without a target
  double trace_lambda_l = 0.0;
  double trace_lambda_r = 0.0;
  double lambda_r_error = 0.0;  // ||Lambda_r - sqrt(2 pi |G(zeta)|^2)||, NaN without G
  bool near_excluded = false;
};

/// Rows k = 1..k_max on the leading systems of t (t.blocks() >= k_max), comparing
/// M(k, zeta, conj xi) with asymptotic_target(zeta, xi); both zeta and xi lie in the upper
/// half-plane. Target columns are filled when omega and g are supplied and p = 1.
std::vector<ConvergenceRow> convergence_report(const ToeplitzSystem& t, const MatrixFunction* omega,
                                               const OuterFactor* g, Complex zeta, Complex xi,
                                               Index k_max, const Tolerances& tol = {});

/// S(k) = A^{-1} Phi1 beta Phi1* A^{-*} + integral (I + tA)^{-1} Phi1 tau'(t) Phi1* (I + tA*)^{-1} dt
/// by the midpoint rule in theta at M and 2M nodes; QuadratureNotConverged when the two
/// differ by more than tol.quadrature (relative). Returns the 2M value.
CMatrix s_from_measure(const DensityFunction& density, const CMatrix& beta, Index k,
                       Index samples = 512, const Tolerances& tol = {});

/// beta = lim omega(iy) / (iy), extrapolated from y = 1e5 and 2e5.
CMatrix estimate_beta(const MatrixFunction& omega);

}  // namespace dts
