#pragma once

#include <stdexcept>
#include <string>

namespace fgns {

// Bad parameters or configuration. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A runtime invariant (divergence-free, ball invariance, tolerance) failed.
// Maps to CLI exit code 3.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iteration failed to converge or started to diverge. Exit code 4.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fgns
