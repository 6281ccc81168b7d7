#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uea {

enum class ErrorCode {
  LengthMismatch,
  NegativeProbability,
  SumOutOfTolerance,
  OutOfRange,
  RateOutOfRange,
  BetaOutOfRange,
  DegenerateAllZero,
  NonPositiveWeight,
  EmptyWeights,
  DimensionMismatch,
  ZeroTrials,
  ZeroP1,
  NonPositiveAlphaMargin,
  TooLarge,
  UnreachableOptimum,
  TooFewSamples,
  EmptySample,
  BadInput,
  ConfigParse,
  SchemaViolation,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::SumOutOfTolerance: return "SumOutOfTolerance";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::RateOutOfRange: return "RateOutOfRange";
    case ErrorCode::BetaOutOfRange: return "BetaOutOfRange";
    case ErrorCode::DegenerateAllZero: return "DegenerateAllZero";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::EmptyWeights: return "EmptyWeights";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroTrials: return "ZeroTrials";
    case ErrorCode::ZeroP1: return "ZeroP1";
    case ErrorCode::NonPositiveAlphaMargin: return "NonPositiveAlphaMargin";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::UnreachableOptimum: return "UnreachableOptimum";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
  }
  return "Unknown";
}

// All library failures surface as this exception; the code identifies the
// contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace uea
