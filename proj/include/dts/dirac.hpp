#pragma once

#include <functional>
#include <vector>

#include "dts/numkernel.hpp"

namespace dts {

/// Evaluator for a matrix-valued function of one complex variable.
using MatrixFunction = std::function<CMatrix(Complex)>;

/// The fixed 2p x 2p matrices of the theory:
///   j = diag(I, -I),  J = [[0, I], [I, 0]],  K = (1/sqrt 2) [[I, -I], [I, I]].
struct SignatureConstants {
  Index p = 0;
  CMatrix j;
  CMatrix J;
  CMatrix K;

  static SignatureConstants make(Index p);
};

/// A finite potential {C_0, ..., C_{N-1}} whose blocks are positive definite and
/// j-unitary (C j C = j). Only obtainable through validate_potential().
class Potential {
 public:
  Index p() const { return p_; }
  Index size() const { return static_cast<Index>(c_.size()); }
  bool empty() const { return c_.empty(); }
  const CMatrix& operator[](Index k) const { return c_[static_cast<std::size_t>(k)]; }
  const std::vector<CMatrix>& blocks() const { return c_; }
  /// Largest ||C_k j C_k - j||_F / ||j||_F observed during validation.
  double max_residual() const { return max_residual_; }

 private:
  friend Potential validate_potential(Index p, std::vector<CMatrix> c, const Tolerances& tol);
  Index p_ = 0;
  std::vector<CMatrix> c_;
  double max_residual_ = 0.0;
};

/// Checks positivity and j-unitarity of every block. Failure names the first bad
/// index: NotPositiveDefinite(k) or JUnitarityBroken(k, residual).
Potential validate_potential(Index p, std::vector<CMatrix> c, const Tolerances& tol = {});
/// Same, with p inferred from the first block (c must be non-empty).
Potential validate_potential(std::vector<CMatrix> c, const Tolerances& tol = {});

/// ||C j C - j||_F / ||j||_F for a single block.
double j_unitarity_residual(const CMatrix& c);

struct FundamentalSolution {
  Complex lambda;
  std::vector<CMatrix> w;  // W_0 = I, ..., W_N
};

/// W_{k+1}(lambda) = (I - (i/lambda) j C_k) W_k(lambda), W_0 = I, for k < n.
FundamentalSolution fundamental_solution(const Potential& pot, Complex lambda, Index n);

/// Inverts one step of the recursion: C_k = -i lambda j (I - W_{k+1} W_k^{-1}).
/// The result is not validated; callers check positivity and j-unitarity.
CMatrix extract_potential_step(const CMatrix& w_k, const CMatrix& w_next, Complex lambda);

struct WeylSeriesDiagnostic {
  std::vector<CMatrix> partial_sums;  // m = 0..K
  std::vector<double> traces;
  /// trace of the last summand over the trace of the last partial sum; small
  /// values mean the sum has visibly saturated.
  double saturation_ratio = 0.0;
};

/// Partial sums of sum_k [i phi* I] q^k K W_k* C_k W_k K* [-i phi; I] at a point
/// of the lower half-plane. This is a bounded-sum diagnostic, never a verdict.
WeylSeriesDiagnostic weyl_series_partial_sums(const Potential& pot, const MatrixFunction& phi,
                                              Complex lambda, Index k);

}  // namespace dts
