#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gemstop {

enum class ErrorCode {
  // signal-io
  NotWav,
  UnsupportedFormat,
  TruncatedFile,
  SyntaxError,
  OverlapError,
  NonMonotonic,
  // acoustics
  IntervalOutOfRange,
  DegenerateWindow,
  EmptyInterval,
  NoBurstFound,
  MoreThanTwoBursts,
  // gemination
  InconsistentEvents,
  MissingMetadata,
  // stats
  EmptyInput,
  TooFewGroups,
  ZeroWithinVariance,
  NonConvergence,
  // synth
  SpecInfeasible,
  // shared
  IoError,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotWav: return "NotWav";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::OverlapError: return "OverlapError";
    case ErrorCode::NonMonotonic: return "NonMonotonic";
    case ErrorCode::IntervalOutOfRange: return "IntervalOutOfRange";
    case ErrorCode::DegenerateWindow: return "DegenerateWindow";
    case ErrorCode::EmptyInterval: return "EmptyInterval";
    case ErrorCode::NoBurstFound: return "NoBurstFound";
    case ErrorCode::MoreThanTwoBursts: return "MoreThanTwoBursts";
    case ErrorCode::InconsistentEvents: return "InconsistentEvents";
    case ErrorCode::MissingMetadata: return "MissingMetadata";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::TooFewGroups: return "TooFewGroups";
    case ErrorCode::ZeroWithinVariance: return "ZeroWithinVariance";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::SpecInfeasible: return "SpecInfeasible";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above, so
/// batch drivers can record it per token instead of aborting.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by text parsers; line and column are 1-based (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& message, std::size_t line, std::size_t column = 0)
      : Error(code, "line " + std::to_string(line) +
                        (column ? ", column " + std::to_string(column) : std::string()) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace gemstop
