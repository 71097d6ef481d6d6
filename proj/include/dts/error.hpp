#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dts {

// Every failure raised by the library carries one of these codes. The CLI maps
// them onto exit codes through category().
enum class Errc {
  // validation: the input violates a mathematical precondition
  NotHermitian,
  NotPositiveDefinite,
  JUnitarityBroken,
  IdentityResidualTooLarge,
  SingularA,
  S0NotPD,
  InsufficientMoments,
  ShapeMismatch,
  DensityNotPositive,
  InvalidArgument,
  // numerical: evaluation hit a singularity or failed to converge
  Singular,
  LambdaZero,
  LambdaAtSingularity,
  LambdaNotInLowerHalfPlane,
  LambdaInSpectrum,
  LambdaAtHalfI,
  LambdaMinusI,
  CayleySingular,
  ResolventSingular,
  SingularW,
  EvaluatorFailure,
  AliasingDetected,
  DegeneratePair,
  EqualArguments,
  NotInUpperHalfPlane,
  RealPole,
  QuadratureDivergence,
  QuadratureNotConverged,
  GridTooCoarse,
  NonFinite,
  // input/output
  Parse,
  Io,
};

enum class ErrorCategory { Validation, Numerical, Io };

ErrorCategory category(Errc code) noexcept;
std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::optional<std::int64_t> index = std::nullopt,
        std::optional<double> residual = std::nullopt);

  Errc code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return dts::category(code_); }
  // Offending step / pivot / block index, when the failure is localized.
  std::optional<std::int64_t> index() const noexcept { return index_; }
  std::optional<double> residual() const noexcept { return residual_; }

 private:
  Errc code_;
  std::optional<std::int64_t> index_;
  std::optional<double> residual_;
};

}  // namespace dts
