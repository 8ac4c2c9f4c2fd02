#include "fhl/error.hpp"

namespace fhl {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonPositiveArgument: return "NonPositiveArgument";
    case ErrorCode::DivergentIntegral: return "DivergentIntegral";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::EvaluationAtOrigin: return "EvaluationAtOrigin";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::DegenerateScale: return "DegenerateScale";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::KernelNotIntegrable: return "KernelNotIntegrable";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::DivergentTail: return "DivergentTail";
    case ErrorCode::UnderResolved: return "UnderResolved";
    case ErrorCode::DiagonalEvaluation: return "DiagonalEvaluation";
    case ErrorCode::ExtrapolationDiverged: return "ExtrapolationDiverged";
    case ErrorCode::NoCriticalPoint: return "NoCriticalPoint";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::PositivityLost: return "PositivityLost";
    case ErrorCode::ResonantEps: return "ResonantEps";
    case ErrorCode::ZeroField: return "ZeroField";
    case ErrorCode::MissingRobin: return "MissingRobin";
    case ErrorCode::SampleTooClose: return "SampleTooClose";
    case ErrorCode::EmptyInterior: return "EmptyInterior";
    case ErrorCode::DegenerateStrip: return "DegenerateStrip";
    case ErrorCode::Precondition: return "Precondition";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::MissingRequired: return "MissingRequired";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::QuadratureFailure:
    case ErrorCode::DivergentTail:
    case ErrorCode::ExtrapolationDiverged:
    case ErrorCode::NoCriticalPoint:
    case ErrorCode::NoConvergence:
    case ErrorCode::PositivityLost:
    case ErrorCode::ZeroField:
      return true;
    default:
      return false;
  }
}

}  // namespace fhl
