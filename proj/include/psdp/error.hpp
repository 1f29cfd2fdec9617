#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace psdp {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  NonConvergence,
  ParseError,
  ValidationError,
  IoError,
  InfeasibleStructure,
  AllConstraintsTrivial,
  InfeasibleInput,
  ThrSearchOverrun,
  DegenerateProjector,
  MaxIterationsExceeded,
  InvariantViolation,
  NotDiagonal,
  OracleInfeasible,
  ResolutionUnreachable,
  NoSamplesAccepted,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InfeasibleStructure: return "InfeasibleStructure";
    case ErrorKind::AllConstraintsTrivial: return "AllConstraintsTrivial";
    case ErrorKind::InfeasibleInput: return "InfeasibleInput";
    case ErrorKind::ThrSearchOverrun: return "ThrSearchOverrun";
    case ErrorKind::DegenerateProjector: return "DegenerateProjector";
    case ErrorKind::MaxIterationsExceeded: return "MaxIterationsExceeded";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::NotDiagonal: return "NotDiagonal";
    case ErrorKind::OracleInfeasible: return "OracleInfeasible";
    case ErrorKind::ResolutionUnreachable: return "ResolutionUnreachable";
    case ErrorKind::NoSamplesAccepted: return "NoSamplesAccepted";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace psdp
