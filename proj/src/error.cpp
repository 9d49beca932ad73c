#include "condevo/error.hpp"

namespace condevo {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidDimension: return "invalid-dimension";
    case ErrorCode::IndexOutOfRange: return "index-out-of-range";
    case ErrorCode::NonHermitianInput: return "non-hermitian-input";
    case ErrorCode::InvalidState: return "invalid-state";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::NotOffsetPreserving: return "not-offset-preserving";
    case ErrorCode::NotDiagonal: return "not-diagonal";
    case ErrorCode::DegenerateParams: return "degenerate-params";
    case ErrorCode::InvalidParams: return "invalid-params";
    case ErrorCode::NegativeTime: return "negative-time";
    case ErrorCode::ExpmFailure: return "expm-failure";
    case ErrorCode::ZeroGammaEg: return "zero-gamma_eg";
    case ErrorCode::QuadratureNotConverged: return "quadrature-not-converged";
    case ErrorCode::StepTooLarge: return "step-too-large";
    case ErrorCode::NonphysicalProbability: return "nonphysical-probability";
    case ErrorCode::NonphysicalState: return "nonphysical-state";
    case ErrorCode::ZeroProbabilityBranch: return "zero-probability-branch";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::ValidationError: return "validation-error";
    case ErrorCode::ConfigMismatch: return "config-mismatch";
  }
  return "unknown";
}

}  // namespace condevo
