#pragma once

#include <stdexcept>
#include <string>

namespace gevlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or argument (maps to CLI exit code 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// e^{tau <xi>^sigma} would exceed the configured exponent cap.
class GevreyOverflow : public Error {
 public:
  GevreyOverflow(double xi, double exponent, double cap);
  double xi() const noexcept { return xi_; }
  double exponent() const noexcept { return exponent_; }

 private:
  double xi_;
  double exponent_;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

class CflViolation : public Error {
 public:
  CflViolation(double dt, double required_dt);
  double required_dt() const noexcept { return required_dt_; }

 private:
  double required_dt_;
};

class StencilOutOfDomain : public Error {
 public:
  using Error::Error;
};

class StepBudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace gevlab
