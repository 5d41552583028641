#include "q1d/errors.hpp"

namespace q1d {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "InvalidInput";
    case ErrorCode::not_minimal: return "NotMinimal";
    case ErrorCode::asymmetric_support: return "AsymmetricSupport";
    case ErrorCode::singular_system: return "SingularSystem";
    case ErrorCode::domain_error: return "DomainError";
    case ErrorCode::bracket_failure: return "BracketFailure";
    case ErrorCode::non_convergence: return "NonConvergence";
    case ErrorCode::runaway_simulation: return "RunawaySimulation";
    case ErrorCode::out_of_horizon: return "OutOfHorizon";
    case ErrorCode::insufficient_samples: return "InsufficientSamples";
    case ErrorCode::asymmetric_grid: return "AsymmetricGrid";
    case ErrorCode::no_overlap: return "NoOverlap";
    case ErrorCode::internal_inconsistency: return "InternalInconsistency";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input:
    case ErrorCode::not_minimal:
    case ErrorCode::asymmetric_support:
    case ErrorCode::insufficient_samples:
    case ErrorCode::asymmetric_grid:
    case ErrorCode::no_overlap:
    case ErrorCode::out_of_horizon:
    case ErrorCode::domain_error:
      return true;
    default:
      return false;
  }
}

}  // namespace q1d
