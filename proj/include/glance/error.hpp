#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace glance {

enum class ErrorCode {
  MalformedHeader,
  TruncatedData,
  UnsupportedMagic,
  RaggedRows,
  ValueOutOfRange,
  MalformedValue,
  EmptyInput,
  InvalidDimensions,
  DegenerateHistogram,
  EmptyForeground,
  DimensionMismatch,
  InconsistentCounts,
  SeriesTooShort,
  SpecOutOfBounds,
  DatasetTooSmall,
  SingleClassTrainSet,
  InvalidArgument,
  IoError,
};

constexpr auto to_string(ErrorCode code) -> std::string_view
{
  switch (code) {
  case ErrorCode::MalformedHeader: return "MALFORMED_HEADER";
  case ErrorCode::TruncatedData: return "TRUNCATED_DATA";
  case ErrorCode::UnsupportedMagic: return "UNSUPPORTED_MAGIC";
  case ErrorCode::RaggedRows: return "RAGGED_ROWS";
  case ErrorCode::ValueOutOfRange: return "VALUE_OUT_OF_RANGE";
  case ErrorCode::MalformedValue: return "MALFORMED_VALUE";
  case ErrorCode::EmptyInput: return "EMPTY_INPUT";
  case ErrorCode::InvalidDimensions: return "INVALID_DIMENSIONS";
  case ErrorCode::DegenerateHistogram: return "DEGENERATE_HISTOGRAM";
  case ErrorCode::EmptyForeground: return "EMPTY_FOREGROUND";
  case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
  case ErrorCode::InconsistentCounts: return "INCONSISTENT_COUNTS";
  case ErrorCode::SeriesTooShort: return "SERIES_TOO_SHORT";
  case ErrorCode::SpecOutOfBounds: return "SPEC_OUT_OF_BOUNDS";
  case ErrorCode::DatasetTooSmall: return "DATASET_TOO_SMALL";
  case ErrorCode::SingleClassTrainSet: return "SINGLE_CLASS_TRAIN_SET";
  case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
  case ErrorCode::IoError: return "IO_ERROR";
  }
  return "UNKNOWN";
}

/// Every failure raised by the library carries one of the codes above; the
/// message is prefixed with the code name so CLI output stays greppable.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code)
  {
  }

  [[nodiscard]] auto code() const noexcept -> ErrorCode { return code_; }

private:
  ErrorCode code_;
};

} // namespace glance
