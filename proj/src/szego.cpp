#include "dts/szego.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dts/kernels.hpp"

namespace dts {

namespace {

constexpr double kPi = std::numbers::pi;

double theta_node(Index m, Index samples) {
  return 2.0 * kPi * (static_cast<double>(m) + 0.5) / static_cast<double>(samples);
}

// Scalar coefficients a with (I + tA)^{-1} Phi1 = a (x) I_p for the order-k structure.
std::vector<Complex> resolvent_phi1(Complex t, Index k) {
  std::vector<Complex> a(static_cast<std::size_t>(k));
  const Complex d = 1.0 + 0.5 * kI * t;
  Complex prefix = 0.0;
  for (Index i = 0; i < k; ++i) {
    const Complex v = (1.0 - kI * t * prefix) / d;
    a[static_cast<std::size_t>(i)] = v;
    prefix += v;
  }
  return a;
}

CMatrix measure_sum(const DensityFunction& density, const CMatrix& beta, Index k, Index samples) {
  const Index p = beta.rows();
  CMatrix s = CMatrix::Zero(k * p, k * p);
  if (beta.norm() > 0.0) {
    // A^{-1} Phi1 = b (x) I_p with (i/2) b_i + i sum_{l<i} b_l = 1.
    std::vector<Complex> b(static_cast<std::size_t>(k));
    Complex prefix = 0.0;
    for (Index i = 0; i < k; ++i) {
      b[static_cast<std::size_t>(i)] = (1.0 - kI * prefix) / (0.5 * kI);
      prefix += b[static_cast<std::size_t>(i)];
    }
    for (Index i = 0; i < k; ++i) {
      for (Index l = 0; l < k; ++l) {
        s.block(i * p, l * p, p, p) +=
            b[static_cast<std::size_t>(i)] * std::conj(b[static_cast<std::size_t>(l)]) * beta;
      }
    }
  }
  const double weight = kPi / static_cast<double>(samples);  // (1/2)(2 pi / M)
  for (Index m = 0; m < samples; ++m) {
    const double th = theta_node(m, samples);
    const double t = -1.0 / std::tan(0.5 * th);
    const CMatrix tau = density(t);
    const std::vector<Complex> a = resolvent_phi1(t, k);
    const double w = weight * (1.0 + t * t);
    for (Index i = 0; i < k; ++i) {
      for (Index l = 0; l < k; ++l) {
        s.block(i * p, l * p, p, p) +=
            (w * a[static_cast<std::size_t>(i)] * std::conj(a[static_cast<std::size_t>(l)])) * tau;
      }
    }
  }
  return real_part(s);
}

}  // namespace

MatrixFunction omega_from_phi(MatrixFunction phi) {
  return [phi = std::move(phi)](Complex zeta) -> CMatrix {
    if (zeta == Complex(0.0)) throw Error(Errc::InvalidArgument, "omega is evaluated at zeta = 0");
    return -phi(2.0 / zeta);
  };
}

MatrixFunction weyl_from_moments(const MomentData& m) {
  return [m](Complex lambda) -> CMatrix {
    if (std::abs(lambda - kI) < 1e-14) throw Error(Errc::EvaluatorFailure, "lambda = i");
    const Complex z = (lambda + kI) / (lambda - kI);
    CMatrix acc = 0.5 * m.s[0] + kI * m.nu;
    Complex zk = 1.0;
    for (Index k = 1; k < m.count(); ++k) {
      zk *= z;
      acc += zk * m.s[static_cast<std::size_t>(k)];
    }
    return -kI * acc;
  };
}

double herglotz_margin(const MatrixFunction& omega, const std::vector<Complex>& points) {
  double worst = std::numeric_limits<double>::infinity();
  for (const Complex z : points) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(imag_part(omega(z)), Eigen::EigenvaluesOnly);
    worst = std::min(worst, es.eigenvalues().minCoeff());
  }
  return worst;
}

CMatrix boundary_density(const MatrixFunction& omega, double t) {
  CMatrix w;
  try {
    w = omega(Complex(t, 0.0));
  } catch (const Error& e) {
    throw Error(Errc::RealPole, std::string("omega has a pole on the real line: ") + e.what());
  }
  if (!w.allFinite()) throw Error(Errc::RealPole, "omega is not finite on the real line");
  return imag_part(w) / kPi;
}

DensityFunction density_from_omega(MatrixFunction omega) {
  return [omega = std::move(omega)](double t) { return boundary_density(omega, t); };
}

std::vector<double> circle_nodes(Index samples) {
  std::vector<double> t(static_cast<std::size_t>(samples));
  for (Index m = 0; m < samples; ++m) {
    t[static_cast<std::size_t>(m)] = -1.0 / std::tan(0.5 * theta_node(m, samples));
  }
  return t;
}

double szego_integral(const DensityFunction& density, Index samples) {
  if (samples < 2) throw Error(Errc::InvalidArgument, "need at least two quadrature nodes");
  double sum = 0.0;
  for (const double t : circle_nodes(samples)) {
    const Complex det = density(t).determinant();
    if (!(det.real() > 0.0)) {
      std::ostringstream os;
      os << "det tau'(" << t << ") = " << det.real() << " is not positive";
      throw Error(Errc::QuadratureDivergence, os.str());
    }
    sum += std::log(det.real());
  }
  const double value = kPi * sum / static_cast<double>(samples);
  if (value < -1e6) throw Error(Errc::QuadratureDivergence, "Szego integral diverges to -infinity");
  return value;
}

Complex OuterFactor::at_disk(Complex z) const {
  // Horner on c_0 + 2 sum c_k z^k.
  Complex h = 0.0;
  for (auto it = coeff_.rbegin(); it != coeff_.rend(); ++it) h = h * z + *it;
  return std::exp(h);
}

Complex OuterFactor::operator()(Complex zeta) const {
  if (zeta.imag() < 0.0) throw Error(Errc::NotInUpperHalfPlane, "G is defined on the upper half-plane");
  return at_disk((zeta - kI) / (zeta + kI));
}

std::vector<Complex> OuterFactor::boundary_values() const {
  std::vector<Complex> out;
  out.reserve(theta_.size());
  for (const double th : theta_) out.push_back(at_disk(std::polar(1.0, th)));
  return out;
}

OuterFactor outer_factor_scalar(const DensityFunction& density, Index samples,
                                const Tolerances& tol) {
  if (samples < 8 || samples % 2 != 0) {
    throw Error(Errc::InvalidArgument, "grid size must be even and at least 8");
  }
  OuterFactor g;
  g.t_ = circle_nodes(samples);
  g.theta_.resize(static_cast<std::size_t>(samples));
  g.log_w_.resize(static_cast<std::size_t>(samples));
  std::vector<double> dens(static_cast<std::size_t>(samples));
  for (Index m = 0; m < samples; ++m) {
    const auto i = static_cast<std::size_t>(m);
    g.theta_[i] = theta_node(m, samples);
    const CMatrix tau = density(g.t_[i]);
    if (tau.rows() != 1 || tau.cols() != 1) {
      throw Error(Errc::ShapeMismatch, "scalar outer factorization needs p = 1");
    }
    const double v = tau(0, 0).real();
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "density is not positive at t = " << g.t_[i];
      throw Error(Errc::DensityNotPositive, os.str(), m);
    }
    dens[i] = v;
    g.log_w_[i] = std::log(v);
  }
  const Index half = samples / 2;
  g.coeff_.resize(static_cast<std::size_t>(half));
  for (Index k = 0; k < half; ++k) {
    Complex acc = 0.0;
    for (Index m = 0; m < samples; ++m) {
      const auto i = static_cast<std::size_t>(m);
      acc += 0.5 * g.log_w_[i] * std::polar(1.0, -static_cast<double>(k) * g.theta_[i]);
    }
    acc /= static_cast<double>(samples);
    g.coeff_[static_cast<std::size_t>(k)] = k == 0 ? acc : 2.0 * acc;
  }
  const std::vector<Complex> bv = g.boundary_values();
  for (std::size_t i = 0; i < bv.size(); ++i) {
    g.boundary_error_ = std::max(g.boundary_error_, std::abs(std::norm(bv[i]) / dens[i] - 1.0));
  }
  if (g.boundary_error_ > tol.factorization) {
    std::ostringstream os;
    os << "|G|^2 misses the density by " << g.boundary_error_ << " on the boundary grid";
    throw Error(Errc::GridTooCoarse, os.str(), std::nullopt, g.boundary_error_);
  }
  return g;
}

CMatrix asymptotic_target(const MatrixFunction& omega, const OuterFactor& g, Complex zeta,
                          Complex xi) {
  const CMatrix wz = omega(zeta);
  const CMatrix wx = omega(xi);
  if (wz.rows() != 1) throw Error(Errc::ShapeMismatch, "asymptotic target needs p = 1");
  const Complex scale = 1.0 / (2.0 * kPi * g(zeta) * std::conj(g(xi)));
  CMatrix left(2, 1), right(1, 2);
  left << -kI * wz(0, 0), 1.0;
  right << kI * std::conj(wx(0, 0)), 1.0;
  return scale * left * right;
}

std::vector<ConvergenceRow> convergence_report(const ToeplitzSystem& t, const MatrixFunction* omega,
                                               const OuterFactor* g, Complex zeta, Complex xi,
                                               Index k_max, const Tolerances& tol) {
  if (k_max < 1 || k_max > t.blocks()) {
    throw Error(Errc::InvalidArgument, "k_max must lie in 1..N of the supplied system");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CMatrix target;
  double lambda_r_limit = nan;
  const bool with_target = omega != nullptr && g != nullptr && t.p() == 1;
  if (with_target) {
    target = asymptotic_target(*omega, *g, zeta, xi);
    lambda_r_limit = std::sqrt(2.0 * kPi * std::norm((*g)(zeta)));
  }
  std::vector<ConvergenceRow> rows;
  for (Index k = 1; k <= k_max; ++k) {
    const ToeplitzSystem sys = k == t.blocks() ? t : t.leading(k);
    const KernelPoint kp = eval_m(sys, k, zeta, std::conj(xi), tol);
    const WeylDisk d = weyl_disk(sys, zeta, tol);
    ConvergenceRow r;
    r.k = k;
    r.m = kp.m;
    r.near_excluded = kp.near_excluded;
    r.trace_lambda_l = d.lambda_l.trace().real();
    r.trace_lambda_r = d.lambda_r.trace().real();
    r.m_error = with_target ? (kp.m - target).norm() : nan;
    r.lambda_r_error = with_target ? std::abs(d.lambda_r(0, 0).real() - lambda_r_limit) : nan;
    rows.push_back(std::move(r));
  }
  return rows;
}

CMatrix s_from_measure(const DensityFunction& density, const CMatrix& beta, Index k, Index samples,
                       const Tolerances& tol) {
  if (k < 1) throw Error(Errc::InvalidArgument, "order k must be positive");
  require_square(beta, "beta");
  const CMatrix coarse = measure_sum(density, beta, k, samples);
  const CMatrix fine = measure_sum(density, beta, k, 2 * samples);
  const double change = rel_diff(coarse, fine);
  if (change > tol.quadrature) {
    std::ostringstream os;
    os << "grid doubling changed S(k) by " << change;
    throw Error(Errc::QuadratureNotConverged, os.str(), std::nullopt, change);
  }
  return fine;
}

CMatrix estimate_beta(const MatrixFunction& omega) {
  // omega(iy) / (iy) = beta + c / y + O(1/y^2); one Richardson step removes c / y.
  const double y = 1e5;
  const CMatrix f1 = omega(Complex(0.0, y)) / Complex(0.0, y);
  const CMatrix f2 = omega(Complex(0.0, 2.0 * y)) / Complex(0.0, 2.0 * y);
  return real_part(2.0 * f2 - f1);
}

}  // namespace dts
