#pragma once

#include <stdexcept>
#include <string>

namespace rkhm {

enum class ErrorCode {
  IterationLimitExceeded,
  NotPSD,
  NotHermitian,
  NonFinite,
  DimensionMismatch,
  PointKindMismatch,
  KernelMismatch,
  EmptySample,
  DegenerateGram,
  InvalidDimension,
  InvalidArgument,
  ConfigError,
  DataError,
};

const char* to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code lets
/// callers (the CLI in particular) classify the failure without string
/// matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IterationLimitExceeded: return "IterationLimitExceeded";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::PointKindMismatch: return "PointKindMismatch";
    case ErrorCode::KernelMismatch: return "KernelMismatch";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::DegenerateGram: return "DegenerateGram";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::DataError: return "DataError";
  }
  return "Unknown";
}

}  // namespace rkhm
