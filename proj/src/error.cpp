#include "derfolio/error.hpp"

namespace derfolio {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::WeightSumViolation: return "WeightSumViolation";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::StaleDerivedValues: return "StaleDerivedValues";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidPeriod: return "InvalidPeriod";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::ZeroBaseline: return "ZeroBaseline";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::UnitMismatch: return "UnitMismatch";
    case ErrorCode::ZeroRisk: return "ZeroRisk";
    case ErrorCode::TooManyAssets: return "TooManyAssets";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::SingularAfterRidge: return "SingularAfterRidge";
    case ErrorCode::NoExcessReturn: return "NoExcessReturn";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::ReadFailure: return "ReadFailure";
    case ErrorCode::WriteFailure: return "WriteFailure";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::WrongFieldCount: return "WrongFieldCount";
    case ErrorCode::DuplicatePeriod: return "DuplicatePeriod";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::OutOfOrderPeriods: return "OutOfOrderPeriods";
    case ErrorCode::MixedGranularity: return "MixedGranularity";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
  }
  return "Unknown";
}

bool is_optimization_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularAfterRidge:
    case ErrorCode::NoExcessReturn:
    case ErrorCode::Infeasible:
    case ErrorCode::ZeroRisk:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

}  // namespace derfolio
