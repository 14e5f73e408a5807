#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace beliefrev {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration, file contents, or argument values. The CLI maps
// these to exit code 1; everything else exits 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Raised when an observation assigns zero posterior mass to every value of an
// attribute. Callers decide whether to propagate or fall back to the
// transition-predicted belief.
class DegenerateEvidenceError : public Error {
 public:
  explicit DegenerateEvidenceError(std::string message, int attribute = -1)
      : Error(std::move(message)), attribute_(attribute) {}

  // Index of the offending attribute, or -1 when not attributable.
  int attribute() const noexcept { return attribute_; }

 private:
  int attribute_;
};

// Fixed-point iteration stopped at max_iter without meeting tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(std::string message, double residual)
      : Error(std::move(message)), residual_(residual) {}

  // L1 change at the last iteration.
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace beliefrev
