#pragma once

#include <stdexcept>
#include <string>

namespace monocurv {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NotHermitian,
  NotPositiveDefinite,
  NotNormalized,
  NotTangent,
  NotOrthogonal,
  IllConditioned,
  DimensionTooSmall,
  SingularCompanion,
  LengthMismatch,
  SumMismatch,
  IndexOutOfRange,
  OrderViolation,
};

const char* to_string(ErrorCode code) noexcept;

/// Single exception type for every failed precondition in the library.
/// The code identifies the violated contract; the message carries detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotTangent: return "NotTangent";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::SingularCompanion: return "SingularCompanion";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SumMismatch: return "SumMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::OrderViolation: return "OrderViolation";
  }
  return "Unknown";
}

}  // namespace monocurv
