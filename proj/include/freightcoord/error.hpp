#pragma once

#include <stdexcept>
#include <string>

namespace fcoord {

/// Malformed or out-of-domain input (negative demand, non-finite cost, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested operation exceeds what the chosen solver can handle
/// (instance too large, node budget exhausted, ...).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// LP reported infeasible or unbounded, or a cutting-plane loop did not close.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant was violated (e.g. a negative Frank-Wolfe gap).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace fcoord
