#pragma once

#include <stdexcept>
#include <string>

namespace walklab {

/// A parameter or state lies outside an operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Too few usable samples for a regression.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iteration failed to reach its tolerance within the iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A hard runtime invariant was falsified during simulation.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace walklab

namespace walklab {

/// A coordinate left the representable range (|x| > 1e300).
class SimulationOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace walklab
