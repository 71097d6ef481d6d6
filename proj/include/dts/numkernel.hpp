#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dts/error.hpp"

namespace dts {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Numerical thresholds shared by all modules. Every field can be overridden by
/// name (see set()), which is how the CLI implements `--tol name=value`.
struct Tolerances {
  double hermitian = 1e-12;       // relative Frobenius asymmetry accepted as Hermitian
  double reconstruct = 1e-10;     // L L* and sqrt^2 reconstruction checks
  double singular_pivot = 1e-14;  // relative LU pivot below which a matrix is singular
  double cond_warning = 1e12;     // condition number that triggers a warning entry
  double potential = 1e-10;       // ||C j C - j|| / ||j|| for a valid potential
  double triple = 1e-10;          // admissibility identity residual
  double displacement = 1e-10;    // A S - S A* - i Pi J Pi* relative to ||S||
  double cd = 1e-9;               // Christoffel-Darboux pass threshold
  double aliasing = 1e-8;         // two-radius disagreement in Taylor extraction
  double quadrature = 1e-8;       // grid-doubling change for measure integrals
  double factorization = 1e-6;    // |G|^2 = density on the boundary grid
  double membership = 1e-10;      // slack for ||u|| <= 1 in the disk test
  double proximity = 0.1;         // distance to 2i that triggers a warning

  // Throws Errc::InvalidArgument for unknown names or non-positive values.
  void set(std::string_view name, double value);
  static std::vector<std::string> names();
};

/// Collects non-fatal diagnostics (ill-conditioning, proximity to excluded points).
struct Warnings {
  std::vector<std::string> entries;
  void add(std::string message) { entries.push_back(std::move(message)); }
  bool empty() const { return entries.empty(); }
};

CMatrix identity(Index n);
CMatrix conj_transpose(const CMatrix& m);

// (m - m*) / 2i and (m + m*) / 2, the matrix imaginary and real parts.
CMatrix imag_part(const CMatrix& m);
CMatrix real_part(const CMatrix& m);

/// ||a - b||_F / max(||b||_F, tiny).
double rel_diff(const CMatrix& a, const CMatrix& b);

void require_square(const CMatrix& m, std::string_view what);
void require_finite(const CMatrix& m, std::string_view what);
bool is_hermitian(const CMatrix& m, double tol);

/// A Hermitian positive definite matrix together with its Cholesky certificate.
class HermitianPD {
 public:
  const CMatrix& matrix() const { return matrix_; }
  /// Lower-triangular L with L L* = matrix().
  const CMatrix& factor() const { return factor_; }
  Index size() const { return matrix_.rows(); }
  double min_pivot() const;

  /// matrix()^{-1} rhs through two triangular solves.
  CMatrix solve(const CMatrix& rhs) const;

  /// The leading k x k principal block; its Cholesky factor is the leading block of factor().
  HermitianPD leading(Index k) const;

 private:
  friend HermitianPD cholesky_pd(const CMatrix& m, const Tolerances& tol);
  HermitianPD(CMatrix m, CMatrix l) : matrix_(std::move(m)), factor_(std::move(l)) {}

  CMatrix matrix_;
  CMatrix factor_;
};

/// Cholesky factorization with positivity certificate. Fails with NotHermitian,
/// or NotPositiveDefinite carrying the zero-based index of the first bad pivot.
HermitianPD cholesky_pd(const CMatrix& m, const Tolerances& tol = {});

/// Hermitian positive definite square root via the Hermitian eigendecomposition.
CMatrix principal_sqrt_pd(const HermitianPD& m);

/// Inverse by partial-pivot LU. Singular when a pivot drops below
/// tol.singular_pivot * ||m||; a condition estimate above tol.cond_warning is
/// reported through `warnings` instead of failing.
CMatrix inverse(const CMatrix& m, Warnings* warnings = nullptr, const Tolerances& tol = {});

/// m^{-1} rhs without forming the inverse; same singularity policy as inverse().
CMatrix solve(const CMatrix& m, const CMatrix& rhs, Warnings* warnings = nullptr,
              const Tolerances& tol = {});

/// Largest singular value.
double spectral_norm(const CMatrix& m);

/// 2-norm condition number from the singular values (infinity if singular).
double condition_number(const CMatrix& m);

/// Eigenvalues of a general complex matrix.
CVector eigenvalues(const CMatrix& m);

}  // namespace dts
