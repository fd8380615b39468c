#pragma once

#include <stdexcept>
#include <string>

namespace impmatch {

// Bad input: violated type invariants, malformed config, missing coverage.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Band does not contain enough points of one of the curves.
class CoverageError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Numerical failure during simulation or estimation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, double time_s)
      : NumericError(what), time_s_(time_s) {}

  /// Simulation time (s) at which the blowup was detected.
  double time() const noexcept { return time_s_; }

 private:
  double time_s_;
};

class SingularityError : public NumericError {
 public:
  using NumericError::NumericError;
};

class EstimationError : public NumericError {
 public:
  using NumericError::NumericError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace impmatch
