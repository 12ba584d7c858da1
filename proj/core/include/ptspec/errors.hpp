#pragma once

#include <stdexcept>
#include <string>

namespace ptspec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request outside what the implementation supports (n above the
/// recurrence bound, closed-form energy for n >= 2).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside the domain of a sampled drive or numeric trajectory.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or runaway growth during time integration.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// A shift solution that does not solve the auxiliary ODE for the drive it is
/// paired with.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// The sampled wavefunction has not decayed at the grid edges.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Time parity of a sampled drive cannot be decided on its span.
class UndecidableError : public Error {
 public:
  using Error::Error;
};

/// A PT check requested for a drive that is not even in time.
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

/// Wave amplitude reached the Dirichlet boundary during propagation.
class ReflectionError : public Error {
 public:
  using Error::Error;
};

/// Malformed arguments (grid bounds, step sizes, mismatched grids).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace ptspec
