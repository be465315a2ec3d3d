#pragma once

#include <stdexcept>
#include <string>

namespace mqslink {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument (geometry, circuit value, option) was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Field evaluated within the wire radius of a filament.
class SingularEvaluation : public Error {
 public:
  using Error::Error;
};

/// Two coils are closer than the wire diameter.
class SeparationError : public Error {
 public:
  using Error::Error;
};

/// Adaptive refinement hit its cap. Carries the last estimate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_estimate, double relative_change)
      : Error(what), last_estimate_(last_estimate), relative_change_(relative_change) {}

  double last_estimate() const noexcept { return last_estimate_; }
  double relative_change() const noexcept { return relative_change_; }

 private:
  double last_estimate_;
  double relative_change_;
};

/// Inductance extraction attempted where Im(Z11) <= 0.
class CapacitiveRegime : public Error {
 public:
  using Error::Error;
};

}  // namespace mqslink
