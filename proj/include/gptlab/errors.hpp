#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gptlab {

enum class ErrorCode {
  NotPointed,
  NotGenerating,
  NumericallyDegenerate,
  DimensionMismatch,
  InvalidParameter,
  DecompositionInconsistent,
  SearchBudgetExceeded,
  MixedScalarMode,
  TooLarge,
  TooSmall,
  IndexOutOfRange,
  KindMismatch,
  Lemma1Violation,
  InvalidState,
  NotCubeSystem,
  NotAllowed,
  CertificateVerificationFailed,
  ControlNotReducible,
  TargetHasNoSymmetry,
  PreconditionUnmet,
  NotNeighboring,
  ArgumentStepFailed,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gptlab
