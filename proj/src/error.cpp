#include "dts/error.hpp"

namespace dts {

ErrorCategory category(Errc code) noexcept {
  switch (code) {
    case Errc::NotHermitian:
    case Errc::NotPositiveDefinite:
    case Errc::JUnitarityBroken:
    case Errc::IdentityResidualTooLarge:
    case Errc::SingularA:
    case Errc::S0NotPD:
    case Errc::InsufficientMoments:
    case Errc::ShapeMismatch:
    case Errc::DensityNotPositive:
    case Errc::InvalidArgument:
      return ErrorCategory::Validation;
    case Errc::Parse:
    case Errc::Io:
      return ErrorCategory::Io;
    default:
      return ErrorCategory::Numerical;
  }
}

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::JUnitarityBroken: return "JUnitarityBroken";
    case Errc::IdentityResidualTooLarge: return "IdentityResidualTooLarge";
    case Errc::SingularA: return "SingularA";
    case Errc::S0NotPD: return "S0NotPD";
    case Errc::InsufficientMoments: return "InsufficientMoments";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::DensityNotPositive: return "DensityNotPositive";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Singular: return "Singular";
    case Errc::LambdaZero: return "LambdaZero";
    case Errc::LambdaAtSingularity: return "LambdaAtSingularity";
    case Errc::LambdaNotInLowerHalfPlane: return "LambdaNotInLowerHalfPlane";
    case Errc::LambdaInSpectrum: return "LambdaInSpectrum";
    case Errc::LambdaAtHalfI: return "LambdaAtHalfI";
    case Errc::LambdaMinusI: return "LambdaMinusI";
    case Errc::CayleySingular: return "CayleySingular";
    case Errc::ResolventSingular: return "ResolventSingular";
    case Errc::SingularW: return "SingularW";
    case Errc::EvaluatorFailure: return "EvaluatorFailure";
    case Errc::AliasingDetected: return "AliasingDetected";
    case Errc::DegeneratePair: return "DegeneratePair";
    case Errc::EqualArguments: return "EqualArguments";
    case Errc::NotInUpperHalfPlane: return "NotInUpperHalfPlane";
    case Errc::RealPole: return "RealPole";
    case Errc::QuadratureDivergence: return "QuadratureDivergence";
    case Errc::QuadratureNotConverged: return "QuadratureNotConverged";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::NonFinite: return "NonFinite";
    case Errc::Parse: return "Parse";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what, std::optional<std::int64_t> index,
             std::optional<double> residual)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code),
      index_(index),
      residual_(residual) {}

}  // namespace dts
