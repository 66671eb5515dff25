#pragma once

#include <stdexcept>
#include <string>

namespace winguide {

/// Bad input: geometry, grid alignment, parameter ranges.  CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// An iteration failed to converge within its budget.  CLI exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// A verified inequality or consistency check did not hold.  CLI exit code 4.
class CheckError : public std::runtime_error {
 public:
  explicit CheckError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace winguide
