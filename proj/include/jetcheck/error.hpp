#pragma once

#include <stdexcept>
#include <string>

namespace jetcheck {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatch, non-unit vector, bad literal.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not supported for this input class.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// An iterative approximation did not meet its tolerance.
class ApproximationError : public Error {
 public:
  ApproximationError(const std::string& what, double best_bound)
      : Error(what), best_bound_(best_bound) {}

  double best_bound() const noexcept { return best_bound_; }

 private:
  double best_bound_;
};

class SamplingError : public Error {
 public:
  SamplingError(const std::string& what, int shell)
      : Error(what), shell_(shell) {}

  int shell() const noexcept { return shell_; }

 private:
  int shell_;
};

/// Too few usable shells or grid points for a regression.
class EstimationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace jetcheck
