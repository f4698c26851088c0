#pragma once

#include <stdexcept>
#include <string>

namespace mcf {

enum class ErrorKind {
  InvalidArgument,
  DegeneratePole,
  NotStrictlyConvex,
  Collapsed,
  NotAGraph,
  ChartBreakdown,
  StepRejected,
  StepFailure,
  BoundaryIndex,
  ZeroMeanCurvature,
  DegenerateFit,
  ConfigError,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` distinguishes the cases.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegeneratePole: return "DegeneratePole";
    case ErrorKind::NotStrictlyConvex: return "NotStrictlyConvex";
    case ErrorKind::Collapsed: return "Collapsed";
    case ErrorKind::NotAGraph: return "NotAGraph";
    case ErrorKind::ChartBreakdown: return "ChartBreakdown";
    case ErrorKind::StepRejected: return "StepRejected";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::BoundaryIndex: return "BoundaryIndex";
    case ErrorKind::ZeroMeanCurvature: return "ZeroMeanCurvature";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace mcf
