#pragma once

#include <stdexcept>
#include <string>

namespace dirlab {

// Bad input: violated precondition, malformed spec, out-of-domain parameter.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A computation that could not be carried out to the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation point too close to the unit circle for the boundary grid.
class PrecisionError : public NumericalError {
 public:
  PrecisionError(const std::string& what, double required_margin)
      : NumericalError(what), required_margin_(required_margin) {}
  double required_margin() const { return required_margin_; }

 private:
  double required_margin_;
};

// An audit whose hypothesis failed on the sampled data; it is not run.
class AuditRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dirlab
