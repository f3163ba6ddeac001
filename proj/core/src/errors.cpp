#include "psheaf/errors.hpp"

namespace psheaf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::OverlappingPoints: return "OverlappingPoints";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::NotAFace: return "NotAFace";
    case ErrorCode::ZeroF: return "ZeroF";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonSymmetric: return "NonSymmetric";
    case ErrorCode::Numerical: return "Numerical";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::ResidueNotFound: return "ResidueNotFound";
    case ErrorCode::ResidueIdentityMismatch: return "ResidueIdentityMismatch";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroF:
    case ErrorCode::NonSymmetric:
    case ErrorCode::Numerical:
    case ErrorCode::DimensionMismatch:
      return 3;
    case ErrorCode::ResidueNotFound:
    case ErrorCode::ResidueIdentityMismatch:
      return 4;
    default:
      return 2;
  }
}

}  // namespace psheaf
