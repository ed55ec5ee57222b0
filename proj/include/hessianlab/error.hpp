#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hessianlab {

enum class ErrorCode {
  DimensionMismatch,
  InvalidDimension,
  NonFinite,
  NotPositiveDefinite,
  IndexOutOfRange,
  UnsupportedBackground,
  OnConeBoundary,
  OffCone,
  SingularPoint,
  TooCloseToSingularity,
  NegativeDensity,
  ZeroDensity,
  SingularRadius,
  HypothesisViolated,
  InvalidArgument,
};

std::string_view label(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(label(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view label(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnsupportedBackground: return "UnsupportedBackground";
    case ErrorCode::OnConeBoundary: return "OnConeBoundary";
    case ErrorCode::OffCone: return "OffCone";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::TooCloseToSingularity: return "TooCloseToSingularity";
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::ZeroDensity: return "ZeroDensity";
    case ErrorCode::SingularRadius: return "SingularRadius";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace hessianlab
