#ifndef FHL_ERROR_HPP
#define FHL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fhl {

enum class ErrorCode {
  OutOfRange,
  NonPositiveArgument,
  DivergentIntegral,
  UnsupportedKind,
  EvaluationAtOrigin,
  QuadratureFailure,
  DegenerateScale,
  EmptyWindow,
  KernelNotIntegrable,
  GridMismatch,
  DivergentTail,
  UnderResolved,
  DiagonalEvaluation,
  ExtrapolationDiverged,
  NoCriticalPoint,
  NoConvergence,
  PositivityLost,
  ResonantEps,
  ZeroField,
  MissingRobin,
  SampleTooClose,
  EmptyInterior,
  DegenerateStrip,
  Precondition,
  UnknownKey,
  TypeError,
  MissingRequired,
  Io,
};

const char* to_string(ErrorCode code);

// Numerical failures map to exit code 2, everything else to 1.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace fhl

#endif
