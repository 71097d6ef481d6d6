#pragma once

#include <optional>
#include <vector>

#include "dts/dirac.hpp"
#include "dts/numkernel.hpp"

namespace dts {

/// {nu, s_0, s_{-1}, ..., s_{-K}}. Blocks with positive index are defined by
/// s_k = s_{-k}^*, so only the non-positive side is stored: s[k] holds s_{-k}.
struct MomentData {
  Index p = 0;
  CMatrix nu;
  std::vector<CMatrix> s;

  Index count() const { return static_cast<Index>(s.size()); }
  /// s_d for any integer d.
  CMatrix block(Index d) const;
};

/// Checks shapes and that nu and s_0 are Hermitian.
void validate_moments(const MomentData& m, const Tolerances& tol = {});

/// Block Toeplitz matrix S(N) and the structure matrices of its displacement identity
///   A S - S A* = i Pi J Pi*,   Pi = [Phi1 Phi2].
/// Block (i, k) of S holds s_{k-i}. A has (i/2) I on the diagonal, i I below it and
/// zeros above.
class ToeplitzSystem {
 public:
  Index blocks() const { return n_; }
  Index p() const { return p_; }
  const CMatrix& s() const { return s_; }
  const CMatrix& a() const { return a_; }
  const CMatrix& phi1() const { return phi1_; }
  const CMatrix& phi2() const { return phi2_; }
  CMatrix pi() const;

  bool positive() const { return chol_.has_value(); }
  /// Cholesky certificate of S; throws NotPositiveDefinite when S is not positive.
  const HermitianPD& cholesky() const;
  /// S^{-1} rhs via the stored factor.
  CMatrix solve_s(const CMatrix& rhs) const { return cholesky().solve(rhs); }

  /// ||A S - S A* - i Pi J Pi*||_F / ||S||_F.
  double displacement_residual() const;

  /// The system of order k <= blocks(), reusing the leading block of the factor.
  ToeplitzSystem leading(Index k) const;

  /// (I + z A)^{-1} rhs and (I + z A*)^{-1} rhs by block prefix/suffix sums.
  CMatrix solve_i_plus_za(Complex z, const CMatrix& rhs) const;
  CMatrix solve_i_plus_za_adj(Complex z, const CMatrix& rhs) const;
  /// (A - lambda I)^{-1} rhs.
  CMatrix solve_a_shift(Complex lambda, const CMatrix& rhs) const;

 private:
  friend ToeplitzSystem assemble(const MomentData& m, Index n, const Tolerances& tol);
  Index n_ = 0;
  Index p_ = 0;
  CMatrix s_, a_, phi1_, phi2_;
  std::optional<HermitianPD> chol_;
  std::optional<Index> failing_pivot_;
  double failing_value_ = 0.0;

  friend struct PositivityVerdict positivity_check(const ToeplitzSystem& t);
};

/// Builds S(N), A(N), Phi1(N), Phi2(N) and attempts the Cholesky factorization of S.
ToeplitzSystem assemble(const MomentData& m, Index n, const Tolerances& tol = {});

/// Only the Np x Np matrix S(N); used where A(N) would be too large to store.
CMatrix toeplitz_matrix(const MomentData& m, Index n);

struct PositivityVerdict {
  bool positive = false;
  double min_pivot = 0.0;               // smallest pivot, or the failing one
  std::optional<Index> failing_index;   // zero-based scalar pivot index
};

PositivityVerdict positivity_check(const ToeplitzSystem& t);

/// Eigenvalues of S(N) in ascending order.
Eigen::VectorXd spectrum(const ToeplitzSystem& t);

/// w_A(N, lambda) = I - i J Pi* S^{-1} (A - lambda I)^{-1} Pi.
CMatrix transfer_function(const ToeplitzSystem& t, Complex lambda);

/// W_N(lambda) = lambda^{-N} (lambda + i)^N K* w_A(N, -lambda/2) K.
CMatrix fundamental_from_moments(const ToeplitzSystem& t, Complex lambda);

/// Coefficient matrix of the linear-fractional transformation,
///   frakA_N(z) = j (I + i z J Pi* (I + z A*)^{-1} S^{-1} Pi) j.
CMatrix frak_a(const ToeplitzSystem& t, Complex zeta);

/// Generators of the strictly lower part: s_{-k} = F U^{k-1} G for k >= 1.
struct SemiseparableGenerators {
  CMatrix f;  // p x n
  CMatrix u;  // n x n
  CMatrix g;  // n x p
};

/// y = S(N) x in O(N (n^2 + n p + p^2)) using an ascending sweep for the lower
/// part, a descending sweep for the upper part and the s_0 diagonal.
CVector semiseparable_matvec(const SemiseparableGenerators& gen, const CMatrix& s0, Index n,
                             const CVector& x);

}  // namespace dts
