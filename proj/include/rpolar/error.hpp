#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rpolar {

enum class ErrorCode {
  NonInvertible,
  NegativeDeterminant,
  NotARotation,
  ZeroQuaternion,
  NonPositiveSigma,
  NonDistinctSigma,
  UndefinedBranch,
  ClassicalRegime,
  NotUnimodular,
  ExhaustedAttempts,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::NegativeDeterminant: return "NegativeDeterminant";
    case ErrorCode::NotARotation: return "NotARotation";
    case ErrorCode::ZeroQuaternion: return "ZeroQuaternion";
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::NonDistinctSigma: return "NonDistinctSigma";
    case ErrorCode::UndefinedBranch: return "UndefinedBranch";
    case ErrorCode::ClassicalRegime: return "ClassicalRegime";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::ExhaustedAttempts: return "ExhaustedAttempts";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// All precondition failures in the library are reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rpolar
