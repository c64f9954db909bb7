#pragma once

#include <stdexcept>
#include <string>

namespace radshift {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad input: scenario, profile or configuration. CLI exit code 2.
struct ValidationError : Error {
  using Error::Error;
};

// A classical turning point: E - V(z) <= m somewhere on the scan.
struct TurningPointError : ValidationError {
  TurningPointError(double z_at, const std::string& what)
      : ValidationError(what), z(z_at) {}
  double z;
};

struct ConfigError : ValidationError {
  using ValidationError::ValidationError;
};

// Evaluation outside a profile's tabulated range or a kinematic domain.
struct RangeError : ValidationError {
  using ValidationError::ValidationError;
};

// Numerical failure: tolerance not met, budget exhausted. CLI exit code 3.
struct NumericalError : Error {
  using Error::Error;
};

struct ConvergenceError : NumericalError {
  using NumericalError::NumericalError;
};

// Oscillatory quadrature would need more panels than the budget allows.
struct ResolutionError : NumericalError {
  ResolutionError(double k_max, const std::string& what)
      : NumericalError(what), suggested_k_max(k_max) {}
  double suggested_k_max;
};

// Resampling requested outside the common span of stencil trajectories.
struct SpanError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace radshift
