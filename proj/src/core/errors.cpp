#include "errors.hpp"

namespace biflab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::out_of_domain: return "OutOfDomain";
    case ErrorCode::root_finding_failure: return "RootFindingFailure";
    case ErrorCode::degenerate_sample: return "DegenerateSample";
    case ErrorCode::degenerate_lattice: return "DegenerateLattice";
    case ErrorCode::degeneration_on_disc: return "DegenerationOnDisc";
    case ErrorCode::continuation_broken: return "ContinuationBroken";
    case ErrorCode::budget_exceeded: return "BudgetExceeded";
    case ErrorCode::anomaly_no_intersection: return "AnomalyNoIntersection";
    case ErrorCode::degenerate_cloud: return "DegenerateCloud";
    case ErrorCode::insufficient_pairs: return "InsufficientPairs";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::bad_config: return "BadConfig";
    case ErrorCode::internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace biflab
