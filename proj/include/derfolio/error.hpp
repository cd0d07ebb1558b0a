#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace derfolio {

enum class ErrorCode {
  // portfolio validation
  WeightSumViolation,
  NegativeWeight,
  StaleDerivedValues,
  DimensionMismatch,
  // series and statistics
  InvalidPeriod,
  NonFiniteValue,
  NegativeValue,
  ZeroBaseline,
  TooShort,
  NoOverlap,
  InsufficientData,
  UnitMismatch,
  ZeroRisk,
  TooManyAssets,
  // optimizer
  InvalidConfig,
  SingularAfterRidge,
  NoExcessReturn,
  Infeasible,
  // ingestion
  ReadFailure,
  WriteFailure,
  MalformedHeader,
  WrongFieldCount,
  DuplicatePeriod,
  NonNumericCell,
  OutOfOrderPeriods,
  MixedGranularity,
  TooFewRows,
  UnknownColumn,
};

/// Stable identifier used in messages, e.g. "NoOverlap".
std::string_view to_string(ErrorCode code) noexcept;

/// True for failures raised by the optimizer rather than by input data.
bool is_optimization_error(ErrorCode code) noexcept;

/**
 * Library-wide exception. The message always starts with the error code
 * name so callers that only print `what()` still name the failure.
 */
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace derfolio
