#include "superlimb/error.hpp"

namespace superlimb {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadModel: return "BadModel";
    case ErrorCode::BadLevel: return "BadLevel";
    case ErrorCode::BadBand: return "BadBand";
    case ErrorCode::BadWindow: return "BadWindow";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::SingularWeight: return "SingularWeight";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::SingularStiffness: return "SingularStiffness";
    case ErrorCode::IkFailure: return "IkFailure";
    case ErrorCode::Unachievable: return "Unachievable";
    case ErrorCode::NumericBlowup: return "NumericBlowup";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch:
    case ErrorCode::BadModel:
    case ErrorCode::BadLevel:
    case ErrorCode::BadBand:
    case ErrorCode::BadWindow:
    case ErrorCode::ParseError:
    case ErrorCode::MissingFile:
      return true;
    default:
      return false;
  }
}

}  // namespace superlimb
