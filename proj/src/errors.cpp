#include "gptlab/errors.hpp"

namespace gptlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPointed: return "NotPointed";
    case ErrorCode::NotGenerating: return "NotGenerating";
    case ErrorCode::NumericallyDegenerate: return "NumericallyDegenerate";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::DecompositionInconsistent: return "DecompositionInconsistent";
    case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorCode::MixedScalarMode: return "MixedScalarMode";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::Lemma1Violation: return "Lemma1Violation";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::NotCubeSystem: return "NotCubeSystem";
    case ErrorCode::NotAllowed: return "NotAllowed";
    case ErrorCode::CertificateVerificationFailed: return "CertificateVerificationFailed";
    case ErrorCode::ControlNotReducible: return "ControlNotReducible";
    case ErrorCode::TargetHasNoSymmetry: return "TargetHasNoSymmetry";
    case ErrorCode::PreconditionUnmet: return "PreconditionUnmet";
    case ErrorCode::NotNeighboring: return "NotNeighboring";
    case ErrorCode::ArgumentStepFailed: return "ArgumentStepFailed";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace gptlab
