#include "geoplan/errors.hpp"

namespace geoplan {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LineOutOfBounds: return "LineOutOfBounds";
    case ErrorCode::AntipodalAmbiguity: return "AntipodalAmbiguity";
    case ErrorCode::NotACircle: return "NotACircle";
    case ErrorCode::UnboundedFactor: return "UnboundedFactor";
    case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::ObstacleTooLarge: return "ObstacleTooLarge";
    case ErrorCode::SeedInCollision: return "SeedInCollision";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::StartNotCovered: return "StartNotCovered";
    case ErrorCode::GoalNotCovered: return "GoalNotCovered";
    case ErrorCode::InfeasiblePath: return "InfeasiblePath";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::TimeBudgetExceeded: return "TimeBudgetExceeded";
    case ErrorCode::NoGridPath: return "NoGridPath";
    case ErrorCode::SegmentEscapesRegion: return "SegmentEscapesRegion";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "UnknownError";
}

}  // namespace geoplan
