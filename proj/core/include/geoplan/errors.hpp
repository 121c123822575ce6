#pragma once

#include <stdexcept>
#include <string>

namespace geoplan {

enum class ErrorCode {
  DimensionMismatch,
  LineOutOfBounds,
  AntipodalAmbiguity,
  NotACircle,
  UnboundedFactor,
  EpsilonTooLarge,
  EpsilonOutOfRange,
  ObstacleTooLarge,
  SeedInCollision,
  Degenerate,
  StartNotCovered,
  GoalNotCovered,
  InfeasiblePath,
  SolverFailure,
  NoPath,
  TimeBudgetExceeded,
  NoGridPath,
  SegmentEscapesRegion,
  BadInput,
};

const char* to_string(ErrorCode code);

/// Single exception type for the whole library; the code identifies the
/// failure class so callers (notably the CLI) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace geoplan
