#pragma once

#include <stdexcept>
#include <string>

namespace fairalloc {

/// Malformed or invalid instance / allocation input.
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No feasible assignment respects the forced/forbidden edge sets.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured enumeration or cycle cap was exceeded.
class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal guarantee failed (e.g. face larger than the perturbation allows).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace fairalloc
