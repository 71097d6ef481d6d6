#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dts/dirac.hpp"
#include "dts/toeplitz.hpp"

namespace dts {

struct RecoveryReport {
  Potential potential;
  std::array<Complex, 2> probes;
  std::vector<double> probe_residuals;    // ||C_k(probe 1) - C_k(probe 2)|| / ||C_k||
  std::vector<double> unitarity_residuals;  // ||C_k j C_k - j|| / ||j||
  /// Index of the first block that could not be recovered (S(k+1) not positive, or
  /// C_k failing validation); potential then holds C_0..C_{k-1}.
  std::optional<Index> stopped_at;
  std::string diagnostic;
  Warnings warnings;

  bool complete() const { return !stopped_at.has_value(); }
};

/// Default probes. 2i and 3i are valid too, but the step W_{k+1} W_k^{-1}
/// amplifies rounding roughly like ((|lambda|+1)/(|lambda|-1))^k.
inline constexpr std::array<Complex, 2> kDefaultProbes{Complex(0.0, 6.0), Complex(0.0, 8.0)};

/// Recovers C_0..C_N from the moments s_0..s_{-N} through
///   W_k(lambda) = lambda^{-k} (lambda + i)^k K* w_A(k, -lambda/2) K,
///   C_k = -i lambda j (I - W_{k+1} W_k^{-1}),
/// evaluated at both probes; the first probe supplies the result.
RecoveryReport recover_potential(const MomentData& m, Index n,
                                 std::array<Complex, 2> probes = kDefaultProbes,
                                 const Tolerances& tol = {});

struct TaylorOptions {
  double radius = 0.5;
  Index samples = 0;  // 0: 4 K rounded up to a power of two (at least 4)
  /// Second radius for the aliasing check; 0 picks radius + 0.2 (or - 0.2 above 0.7).
  double check_radius = 0.0;
};

struct TaylorResult {
  MomentData moments;
  double aliasing_estimate = 0.0;  // max relative disagreement between the two radii
};

/// Taylor coefficients of f(z) = i phi(i (z+1)/(z-1)) by a DFT on |z| = r:
/// alpha_0 gives nu = Im alpha_0 and s_0 = 2 Re alpha_0, alpha_k = s_{-k}.
/// Errors: EvaluatorFailure, AliasingDetected (disagreement above tol.aliasing).
TaylorResult weyl_to_moments(const MatrixFunction& phi, Index k, const TaylorOptions& opts = {},
                             const Tolerances& tol = {});

}  // namespace dts
