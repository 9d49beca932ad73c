#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace condevo {

enum class ErrorCode {
  InvalidDimension,
  IndexOutOfRange,
  NonHermitianInput,
  InvalidState,
  DimensionMismatch,
  NotOffsetPreserving,
  NotDiagonal,
  DegenerateParams,
  InvalidParams,
  NegativeTime,
  ExpmFailure,
  ZeroGammaEg,
  QuadratureNotConverged,
  StepTooLarge,
  NonphysicalProbability,
  NonphysicalState,
  ZeroProbabilityBranch,
  ParseError,
  ValidationError,
  ConfigMismatch,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-checkable error kind alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace condevo
