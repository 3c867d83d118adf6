#include "amolab/errors.hpp"

namespace amolab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::NonGeneric: return "NonGeneric";
    case ErrorCode::DepthOverflow: return "DepthOverflow";
    case ErrorCode::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NotAnEigenfunctionLocally: return "NotAnEigenfunctionLocally";
    case ErrorCode::DegenerateNodes: return "DegenerateNodes";
    case ErrorCode::ScaleTooSmall: return "ScaleTooSmall";
    case ErrorCode::RangeExceeded: return "RangeExceeded";
    case ErrorCode::SiteTooResonant: return "SiteTooResonant";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::InsufficientProfiles: return "InsufficientProfiles";
    case ErrorCode::NoTemperateDirection: return "NoTemperateDirection";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "UnknownError";
}

}  // namespace amolab
