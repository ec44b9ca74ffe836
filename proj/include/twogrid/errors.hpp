#pragma once

#include <stdexcept>
#include <string>

namespace twogrid {

enum class ErrorKind {
  BadParams,
  UnknownProblem,
  TubeTooWide,
  TubeTooNarrow,
  EmptyTube,
  NonConvergence,
  UnsupportedRatio,
  InconsistentSystem,
  SignViolation,
  DegenerateDenominator,
  MultipleCrossings,
  SingularMatrix,
  NoConvergence,
  NoExactSolution,
  Io,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}
  ErrorKind kind() const { return kind_; }
  // Message without the kind prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::UnknownProblem: return "UnknownProblem";
    case ErrorKind::TubeTooWide: return "TubeTooWide";
    case ErrorKind::TubeTooNarrow: return "TubeTooNarrow";
    case ErrorKind::EmptyTube: return "EmptyTube";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::UnsupportedRatio: return "UnsupportedRatio";
    case ErrorKind::InconsistentSystem: return "InconsistentSystem";
    case ErrorKind::SignViolation: return "SignViolation";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::MultipleCrossings: return "MultipleCrossings";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NoExactSolution: return "NoExactSolution";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace twogrid
