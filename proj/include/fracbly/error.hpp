#pragma once

#include <stdexcept>
#include <string>

namespace fracbly {

/// Raised when an argument violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Parameters fall outside the region where an inequality is proven.
/// The message names the violated constraint.
class RegionViolation : public InvalidInput {
 public:
  explicit RegionViolation(const std::string& what) : InvalidInput(what) {}
};

/// An iterative numerical method failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fracbly
