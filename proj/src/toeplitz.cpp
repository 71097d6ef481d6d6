#include "dts/toeplitz.hpp"

#include <cmath>

namespace dts {

namespace {

constexpr double kPivotFloor = 1e-12;

void check_rhs(const ToeplitzSystem& t, const CMatrix& rhs) {
  if (rhs.rows() != t.blocks() * t.p()) {
    throw Error(Errc::ShapeMismatch, "right-hand side does not match N p rows");
  }
}

}  // namespace

CMatrix MomentData::block(Index d) const {
  const Index k = d < 0 ? -d : d;
  if (k >= count()) {
    throw Error(Errc::InsufficientMoments, "moment s_" + std::to_string(d) + " not available");
  }
  const CMatrix& b = s[static_cast<std::size_t>(k)];
  return d > 0 ? CMatrix(b.adjoint()) : b;
}

void validate_moments(const MomentData& m, const Tolerances& tol) {
  if (m.p < 1) throw Error(Errc::InvalidArgument, "block size p must be positive");
  if (m.s.empty()) throw Error(Errc::InsufficientMoments, "no moments supplied");
  if (m.nu.rows() != m.p || m.nu.cols() != m.p) {
    throw Error(Errc::ShapeMismatch, "nu must be p x p");
  }
  for (std::size_t k = 0; k < m.s.size(); ++k) {
    if (m.s[k].rows() != m.p || m.s[k].cols() != m.p) {
      throw Error(Errc::ShapeMismatch, "s[" + std::to_string(k) + "] must be p x p",
                  static_cast<std::int64_t>(k));
    }
    require_finite(m.s[k], "moment block");
  }
  require_finite(m.nu, "nu");
  if (!is_hermitian(m.nu, tol.hermitian)) throw Error(Errc::NotHermitian, "nu is not Hermitian");
  if (!is_hermitian(m.s[0], tol.hermitian)) throw Error(Errc::NotHermitian, "s_0 is not Hermitian");
}

CMatrix toeplitz_matrix(const MomentData& m, Index n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "order N must be positive");
  if (m.count() < n) {
    throw Error(Errc::InsufficientMoments,
                "S(" + std::to_string(n) + ") needs s_0..s_-" + std::to_string(n - 1));
  }
  const Index p = m.p;
  std::vector<CMatrix> upper(static_cast<std::size_t>(n));  // s_d for d > 0
  for (Index d = 1; d < n; ++d) upper[static_cast<std::size_t>(d)] = m.s[static_cast<std::size_t>(d)].adjoint();
  CMatrix s(n * p, n * p);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < n; ++k) {
      const Index d = k - i;
      s.block(i * p, k * p, p, p) =
          d > 0 ? upper[static_cast<std::size_t>(d)] : m.s[static_cast<std::size_t>(-d)];
    }
  }
  return s;
}

ToeplitzSystem assemble(const MomentData& m, Index n, const Tolerances& tol) {
  validate_moments(m, tol);
  ToeplitzSystem t;
  t.n_ = n;
  t.p_ = m.p;
  t.s_ = toeplitz_matrix(m, n);
  // Exactly Hermitian, so the Cholesky test sees the intended matrix.
  t.s_ = real_part(t.s_);
  const Index p = m.p;
  const CMatrix id = identity(p);

  t.a_ = CMatrix::Zero(n * p, n * p);
  for (Index i = 0; i < n; ++i) {
    t.a_.block(i * p, i * p, p, p) = 0.5 * kI * id;
    for (Index k = 0; k < i; ++k) t.a_.block(i * p, k * p, p, p) = kI * id;
  }

  t.phi1_.resize(n * p, p);
  t.phi2_.resize(n * p, p);
  CMatrix acc = 0.5 * m.s[0];
  for (Index i = 0; i < n; ++i) {
    if (i > 0) acc += m.s[static_cast<std::size_t>(i)];
    t.phi1_.middleRows(i * p, p) = id;
    t.phi2_.middleRows(i * p, p) = acc + kI * m.nu;
  }

  try {
    t.chol_ = cholesky_pd(t.s_, tol);
  } catch (const Error& e) {
    if (e.code() != Errc::NotPositiveDefinite) throw;
    t.failing_pivot_ = e.index();
    t.failing_value_ = e.residual().value_or(0.0);
  }
  return t;
}

CMatrix ToeplitzSystem::pi() const {
  CMatrix out(phi1_.rows(), 2 * p_);
  out << phi1_, phi2_;
  return out;
}

const HermitianPD& ToeplitzSystem::cholesky() const {
  if (!chol_) {
    throw Error(Errc::NotPositiveDefinite,
                "S(" + std::to_string(n_) + ") is not positive definite", failing_pivot_,
                failing_value_);
  }
  return *chol_;
}

double ToeplitzSystem::displacement_residual() const {
  const auto sig = SignatureConstants::make(p_);
  const CMatrix pm = pi();
  const CMatrix r = a_ * s_ - s_ * a_.adjoint() - kI * pm * sig.J * pm.adjoint();
  return r.norm() / s_.norm();
}

ToeplitzSystem ToeplitzSystem::leading(Index k) const {
  if (k < 1 || k > n_) throw Error(Errc::InvalidArgument, "leading order out of range");
  ToeplitzSystem t;
  const Index r = k * p_;
  t.n_ = k;
  t.p_ = p_;
  t.s_ = s_.topLeftCorner(r, r);
  t.a_ = a_.topLeftCorner(r, r);
  t.phi1_ = phi1_.topRows(r);
  t.phi2_ = phi2_.topRows(r);
  if (chol_) {
    t.chol_ = chol_->leading(r);
  } else if (failing_pivot_ && *failing_pivot_ >= r) {
    // The failure happened after the leading block, so that block is positive.
    t.chol_ = cholesky_pd(t.s_);
  } else {
    t.failing_pivot_ = failing_pivot_;
    t.failing_value_ = failing_value_;
  }
  return t;
}

// A has diagonal blocks (i/2) I and i I below, so (I + z A) x = b reads
//   (1 + i z / 2) x_i + i z sum_{k<i} x_k = b_i.
CMatrix ToeplitzSystem::solve_i_plus_za(Complex z, const CMatrix& rhs) const {
  check_rhs(*this, rhs);
  const Complex d = 1.0 + 0.5 * kI * z;
  if (std::abs(d) < kPivotFloor) throw Error(Errc::ResolventSingular, "I + z A is singular");
  CMatrix x(rhs.rows(), rhs.cols());
  CMatrix prefix = CMatrix::Zero(p_, rhs.cols());
  for (Index i = 0; i < n_; ++i) {
    x.middleRows(i * p_, p_) = (rhs.middleRows(i * p_, p_) - kI * z * prefix) / d;
    prefix += x.middleRows(i * p_, p_);
  }
  return x;
}

CMatrix ToeplitzSystem::solve_i_plus_za_adj(Complex z, const CMatrix& rhs) const {
  check_rhs(*this, rhs);
  const Complex d = 1.0 - 0.5 * kI * z;
  if (std::abs(d) < kPivotFloor) throw Error(Errc::ResolventSingular, "I + z A* is singular");
  CMatrix x(rhs.rows(), rhs.cols());
  CMatrix suffix = CMatrix::Zero(p_, rhs.cols());
  for (Index i = n_ - 1; i >= 0; --i) {
    x.middleRows(i * p_, p_) = (rhs.middleRows(i * p_, p_) + kI * z * suffix) / d;
    suffix += x.middleRows(i * p_, p_);
  }
  return x;
}

CMatrix ToeplitzSystem::solve_a_shift(Complex lambda, const CMatrix& rhs) const {
  check_rhs(*this, rhs);
  const Complex d = 0.5 * kI - lambda;
  if (std::abs(d) < kPivotFloor) {
    throw Error(Errc::LambdaAtHalfI, "lambda coincides with the spectrum {i/2} of A");
  }
  CMatrix x(rhs.rows(), rhs.cols());
  CMatrix prefix = CMatrix::Zero(p_, rhs.cols());
  for (Index i = 0; i < n_; ++i) {
    x.middleRows(i * p_, p_) = (rhs.middleRows(i * p_, p_) - kI * prefix) / d;
    prefix += x.middleRows(i * p_, p_);
  }
  return x;
}

PositivityVerdict positivity_check(const ToeplitzSystem& t) {
  PositivityVerdict v;
  if (t.chol_) {
    v.positive = true;
    v.min_pivot = t.chol_->min_pivot();
  } else {
    v.positive = false;
    v.min_pivot = t.failing_value_;
    v.failing_index = t.failing_pivot_;
  }
  return v;
}

Eigen::VectorXd spectrum(const ToeplitzSystem& t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(t.s(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

CMatrix transfer_function(const ToeplitzSystem& t, Complex lambda) {
  const auto sig = SignatureConstants::make(t.p());
  const CMatrix pm = t.pi();
  const CMatrix x = t.solve_s(t.solve_a_shift(lambda, pm));
  return identity(2 * t.p()) - kI * sig.J * pm.adjoint() * x;
}

CMatrix fundamental_from_moments(const ToeplitzSystem& t, Complex lambda) {
  if (lambda == Complex(0.0)) throw Error(Errc::LambdaZero, "spectral parameter is zero");
  if (std::abs(lambda + kI) < kPivotFloor) {
    throw Error(Errc::LambdaMinusI, "lambda = -i puts -lambda/2 on the spectrum of A");
  }
  const auto sig = SignatureConstants::make(t.p());
  const double n = static_cast<double>(t.blocks());
  const Complex prefactor = std::exp(n * (std::log(lambda + kI) - std::log(lambda)));
  const CMatrix w = transfer_function(t, -lambda / 2.0);
  return prefactor * sig.K.adjoint() * w * sig.K;
}

CMatrix frak_a(const ToeplitzSystem& t, Complex zeta) {
  const auto sig = SignatureConstants::make(t.p());
  const CMatrix pm = t.pi();
  const CMatrix x = t.solve_i_plus_za_adj(zeta, t.solve_s(pm));
  const CMatrix inner = identity(2 * t.p()) + kI * zeta * sig.J * pm.adjoint() * x;
  return sig.j * inner * sig.j;
}

CVector semiseparable_matvec(const SemiseparableGenerators& gen, const CMatrix& s0, Index n,
                             const CVector& x) {
  const Index p = s0.rows();
  const Index r = gen.u.rows();
  if (x.size() != n * p) throw Error(Errc::ShapeMismatch, "x must have N p entries");
  if (gen.f.rows() != p || gen.f.cols() != r || gen.g.rows() != r || gen.g.cols() != p) {
    throw Error(Errc::ShapeMismatch, "generator shapes are inconsistent");
  }
  CVector y(n * p);
  for (Index i = 0; i < n; ++i) y.segment(i * p, p).noalias() = s0 * x.segment(i * p, p);
  if (gen.f.squaredNorm() == 0.0 || gen.g.squaredNorm() == 0.0) return y;

  // Row block i of the lower part is sum_{k<i} F U^{i-k-1} G x_k.
  CVector h = CVector::Zero(r);
  for (Index i = 0; i < n; ++i) {
    if (i > 0) y.segment(i * p, p).noalias() += gen.f * h;
    h = gen.u * h + gen.g * x.segment(i * p, p);
  }

  // Upper part uses s_{k-i} = (F U^{k-i-1} G)^* for k > i.
  const CMatrix fa = gen.f.adjoint();
  const CMatrix ua = gen.u.adjoint();
  const CMatrix ga = gen.g.adjoint();
  CVector g = CVector::Zero(r);
  for (Index i = n - 1; i >= 0; --i) {
    if (i < n - 1) y.segment(i * p, p).noalias() += ga * g;
    g = ua * g + fa * x.segment(i * p, p);
  }
  return y;
}

}  // namespace dts
