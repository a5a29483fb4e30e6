#pragma once

#include <stdexcept>
#include <string>

namespace rfpca {

/// Failure categories surfaced by the library. CLI exit codes are derived
/// from these: validation errors exit 2, numerical failures 3, I/O 4.
enum class ErrorKind {
  DimensionMismatch,
  InvalidTangent,
  LogUndefined,
  DegenerateInput,
  AntipodalPair,
  NotSkew,
  NoConvergence,
  GridMismatch,
  KOutOfRange,
  ZeroVariance,
  GammaOutOfRange,
  EmptyKernelWindow,
  ZeroRowSum,
  NegativeCoordinate,
  ParseError,
  OffManifold,
  LatitudeOutOfRange,
  IoError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidTangent: return "InvalidTangent";
    case ErrorKind::LogUndefined: return "LogUndefined";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::AntipodalPair: return "AntipodalPair";
    case ErrorKind::NotSkew: return "NotSkew";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::KOutOfRange: return "KOutOfRange";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::GammaOutOfRange: return "GammaOutOfRange";
    case ErrorKind::EmptyKernelWindow: return "EmptyKernelWindow";
    case ErrorKind::ZeroRowSum: return "ZeroRowSum";
    case ErrorKind::NegativeCoordinate: return "NegativeCoordinate";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::OffManifold: return "OffManifold";
    case ErrorKind::LatitudeOutOfRange: return "LatitudeOutOfRange";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind),
        detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

  /// Exit code for CLI surfaces: 2 validation, 3 numerical, 4 I/O.
  int exit_code() const noexcept {
    switch (kind_) {
      case ErrorKind::NoConvergence:
      case ErrorKind::LogUndefined:
      case ErrorKind::AntipodalPair:
        return 3;
      case ErrorKind::IoError:
        return 4;
      default:
        return 2;
    }
  }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& detail) {
  throw Error(kind, detail);
}

}  // namespace rfpca
