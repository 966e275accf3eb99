#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fredholm {

enum class ErrorCode {
  NonPositiveArgument,
  OrderOutOfRange,
  Overflow,
  NonPositiveRadius,
  InvalidGrid,
  GridTooCoarse,
  GridTooNarrow,
  ShapeMismatch,
  TailTruncation,
  ResonantWeight,
  SolvabilityViolated,
  UnknownFamily,
  ZeroDenominator,
  InvalidArgument,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveArgument: return "NonPositiveArgument";
    case ErrorCode::OrderOutOfRange: return "OrderOutOfRange";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::GridTooNarrow: return "GridTooNarrow";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TailTruncation: return "TailTruncationError";
    case ErrorCode::ResonantWeight: return "ResonantWeight";
    case ErrorCode::SolvabilityViolated: return "SolvabilityViolated";
    case ErrorCode::UnknownFamily: return "UnknownFamily";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Library-wide exception. The code is what callers (and the CLI exit-code
/// mapping) dispatch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fredholm
