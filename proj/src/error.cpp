#include "freeevt/error.hpp"

#include <utility>

namespace freeevt {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DomainError: return "domain error";
    case ErrorKind::QuadratureFailure: return "quadrature failure";
    case ErrorKind::NoSignChange: return "no sign change";
    case ErrorKind::LimitNotDetected: return "limit not detected";
    case ErrorKind::InvalidLaw: return "invalid law";
    case ErrorKind::InvalidProbability: return "invalid probability";
    case ErrorKind::InvalidPower: return "invalid power";
    case ErrorKind::NoNormingKnown: return "no norming known";
    case ErrorKind::DegeneratePower: return "degenerate power";
    case ErrorKind::HypothesesViolated: return "hypotheses violated";
    case ErrorKind::ProfileMismatch: return "profile does not factor as claimed";
    case ErrorKind::NoDensity: return "no density";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::ParseError: return "parse error";
  }
  return "unknown error";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

QuadratureFailure::QuadratureFailure(const std::string& what, double partial, double error)
    : Error(ErrorKind::QuadratureFailure, what), partial_(partial), error_(error) {}

HypothesisViolation::HypothesisViolation(std::string condition, const std::string& detail)
    : Error(ErrorKind::HypothesesViolated, condition + ": " + detail),
      condition_(std::move(condition)) {}

}  // namespace freeevt
