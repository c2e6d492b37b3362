#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace minpart {

enum class ErrorCode {
  InvalidArgument,
  EmptyGrid,
  BadPolygon,
  PoleOutsideDomain,
  InconsistentCuts,
  DifferentStructure,
  NoConvergence,
  DimensionTooSmall,
  FactorizationBreakdown,
  EpsOutOfRange,
  InadmissibleEps,
  AllZero,
  EmptyDomain,
  InvalidPoleCount,
  BudgetExhaustedWithoutImprovement,
  SideTooLarge,
  NotFound,
  InvariantViolation,
  ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::BadPolygon: return "BadPolygon";
    case ErrorCode::PoleOutsideDomain: return "PoleOutsideDomain";
    case ErrorCode::InconsistentCuts: return "InconsistentCuts";
    case ErrorCode::DifferentStructure: return "DifferentStructure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::FactorizationBreakdown: return "FactorizationBreakdown";
    case ErrorCode::EpsOutOfRange: return "EpsOutOfRange";
    case ErrorCode::InadmissibleEps: return "InadmissibleEps";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::InvalidPoleCount: return "InvalidPoleCount";
    case ErrorCode::BudgetExhaustedWithoutImprovement: return "BudgetExhaustedWithoutImprovement";
    case ErrorCode::SideTooLarge: return "SideTooLarge";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace minpart
