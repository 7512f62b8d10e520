#pragma once

#include <stdexcept>
#include <string>

namespace bicons {

enum class ErrorKind {
  ZeroVector,
  NonPositiveF,
  NegativeRadicand,
  Inadmissible,
  StepFailure,
  DriftExceeded,
  TooFewSamples,
  OutOfSpan,
  InvalidResolution,
  StencilOutOfDomain,
  DegenerateMetric,
  ZeroMeanCurvature,
  NegativeNormSquared,
  NotOnHyperboloid,
  IoFailure,
  InvalidArgument,
};

const char* to_string(ErrorKind kind) noexcept;

// Every failure in the library surfaces as this exception; the kind is what
// callers (and the command-line frontend's exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace bicons
