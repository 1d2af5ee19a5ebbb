#pragma once

#include <stdexcept>
#include <string>

namespace nlsb {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// ODE integration could not reach the requested tolerance (step underflow,
/// |Im lambda| beyond the configured cap, ...).
struct IntegratorError : Error {
  using Error::Error;
};

/// An operation was requested at or too close to a branch/crossing point
/// where w^2 = 1 and the sheet structure degenerates.
struct BranchPointError : Error {
  using Error::Error;
};

/// Evaluation at a pole (divisor point, Omega pole, ...).
struct PoleError : Error {
  using Error::Error;
};

/// Sheet assignment requested on the real axis without a continuity path.
struct AmbiguousSheetError : Error {
  using Error::Error;
};

/// A divisor point coincides with a gap edge within tolerance.
struct DegenerateDivisorError : Error {
  using Error::Error;
};

/// Two gradient fields do not share a grid.
struct GridMismatchError : Error {
  using Error::Error;
};

/// Linear-fractional transform with ad - bc = 0.
struct DegenerateTransformError : Error {
  using Error::Error;
};

/// Bad CLI/JSON configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace nlsb
