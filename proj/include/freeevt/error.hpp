#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace freeevt {

enum class ErrorKind {
  DomainError,
  QuadratureFailure,
  NoSignChange,
  LimitNotDetected,
  InvalidLaw,
  InvalidProbability,
  InvalidPower,
  NoNormingKnown,
  DegeneratePower,
  HypothesesViolated,
  ProfileMismatch,
  NoDensity,
  InvalidArgument,
  ParseError,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; `kind()` says what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Thrown when adaptive quadrature runs out of refinements; carries the
// best estimate reached so far.
class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, double partial, double error);

  double partial_estimate() const noexcept { return partial_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double partial_;
  double error_;
};

// Thrown when a density profile fails one of the regularity conditions.
// `condition()` is the tag of the failed condition, e.g. "G-Cond1-1".
class HypothesisViolation : public Error {
 public:
  HypothesisViolation(std::string condition, const std::string& detail);

  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

}  // namespace freeevt
