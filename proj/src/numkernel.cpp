#include "dts/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dts {

namespace {

struct TolField {
  const char* name;
  double Tolerances::*field;
};

constexpr TolField kTolFields[] = {
    {"hermitian", &Tolerances::hermitian},
    {"reconstruct", &Tolerances::reconstruct},
    {"singular_pivot", &Tolerances::singular_pivot},
    {"cond_warning", &Tolerances::cond_warning},
    {"potential", &Tolerances::potential},
    {"triple", &Tolerances::triple},
    {"displacement", &Tolerances::displacement},
    {"cd", &Tolerances::cd},
    {"aliasing", &Tolerances::aliasing},
    {"quadrature", &Tolerances::quadrature},
    {"factorization", &Tolerances::factorization},
    {"membership", &Tolerances::membership},
    {"proximity", &Tolerances::proximity},
};

void check_pivots(const Eigen::PartialPivLU<CMatrix>& lu, double scale, Warnings* warnings,
                  const Tolerances& tol) {
  const auto& packed = lu.matrixLU();
  for (Index i = 0; i < packed.rows(); ++i) {
    if (!(std::abs(packed(i, i)) > tol.singular_pivot * scale)) {
      throw Error(Errc::Singular, "LU pivot " + std::to_string(i) + " is below threshold", i);
    }
  }
  if (warnings != nullptr) {
    const double rc = lu.rcond();
    if (rc * tol.cond_warning < 1.0) {
      std::ostringstream os;
      os << "ill-conditioned solve: estimated condition number " << 1.0 / rc;
      warnings->add(os.str());
    }
  }
}

}  // namespace

void Tolerances::set(std::string_view name, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(Errc::InvalidArgument, "tolerance '" + std::string(name) + "' must be positive");
  }
  for (const auto& f : kTolFields) {
    if (name == f.name) {
      this->*(f.field) = value;
      return;
    }
  }
  throw Error(Errc::InvalidArgument, "unknown tolerance name '" + std::string(name) + "'");
}

std::vector<std::string> Tolerances::names() {
  std::vector<std::string> out;
  for (const auto& f : kTolFields) out.emplace_back(f.name);
  return out;
}

CMatrix identity(Index n) { return CMatrix::Identity(n, n); }

CMatrix conj_transpose(const CMatrix& m) { return m.adjoint(); }

CMatrix imag_part(const CMatrix& m) { return (m - m.adjoint()) / (2.0 * kI); }

CMatrix real_part(const CMatrix& m) { return (m + m.adjoint()) / 2.0; }

double rel_diff(const CMatrix& a, const CMatrix& b) {
  const double denom = std::max(b.stableNorm(), std::numeric_limits<double>::min());
  return (a - b).stableNorm() / denom;
}

void require_square(const CMatrix& m, std::string_view what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(Errc::ShapeMismatch, std::string(what) + " must be a non-empty square matrix");
  }
}

void require_finite(const CMatrix& m, std::string_view what) {
  if (!m.allFinite()) throw Error(Errc::NonFinite, std::string(what) + " has non-finite entries");
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).stableNorm() <= tol * std::max(m.stableNorm(), std::numeric_limits<double>::min());
}

double HermitianPD::min_pivot() const {
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < factor_.rows(); ++i) best = std::min(best, std::norm(factor_(i, i)));
  return best;
}

CMatrix HermitianPD::solve(const CMatrix& rhs) const {
  CMatrix y = factor_.triangularView<Eigen::Lower>().solve(rhs);
  return factor_.adjoint().triangularView<Eigen::Upper>().solve(y);
}

HermitianPD HermitianPD::leading(Index k) const {
  return HermitianPD(matrix_.topLeftCorner(k, k), factor_.topLeftCorner(k, k));
}

HermitianPD cholesky_pd(const CMatrix& m, const Tolerances& tol) {
  require_square(m, "cholesky_pd input");
  require_finite(m, "cholesky_pd input");
  if (!is_hermitian(m, tol.hermitian)) throw Error(Errc::NotHermitian, "matrix is not Hermitian");
  const Index n = m.rows();
  CMatrix l = CMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double d = m(j, j).real();
    for (Index k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0)) {
      std::ostringstream os;
      os << "non-positive pivot " << d << " at index " << j;
      throw Error(Errc::NotPositiveDefinite, os.str(), j, d);
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (Index i = j + 1; i < n; ++i) {
      Complex s = m(i, j);
      for (Index k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  // Store the exactly Hermitian version so downstream products stay symmetric.
  CMatrix herm = real_part(m);
  return HermitianPD(std::move(herm), std::move(l));
}

CMatrix principal_sqrt_pd(const HermitianPD& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m.matrix());
  const Eigen::VectorXd roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix& v = es.eigenvectors();
  CMatrix out = v * roots.cast<Complex>().asDiagonal() * v.adjoint();
  return real_part(out);
}

CMatrix inverse(const CMatrix& m, Warnings* warnings, const Tolerances& tol) {
  require_square(m, "inverse input");
  Eigen::PartialPivLU<CMatrix> lu(m);
  check_pivots(lu, m.stableNorm(), warnings, tol);
  return lu.inverse();
}

CMatrix solve(const CMatrix& m, const CMatrix& rhs, Warnings* warnings, const Tolerances& tol) {
  require_square(m, "solve matrix");
  if (rhs.rows() != m.rows()) throw Error(Errc::ShapeMismatch, "solve: row count mismatch");
  Eigen::PartialPivLU<CMatrix> lu(m);
  check_pivots(lu, m.stableNorm(), warnings, tol);
  return lu.solve(rhs);
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double condition_number(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smallest;
}

CVector eigenvalues(const CMatrix& m) {
  require_square(m, "eigenvalues input");
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  return es.eigenvalues();
}

}  // namespace dts
