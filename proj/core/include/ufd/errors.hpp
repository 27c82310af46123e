#pragma once

#include <stdexcept>
#include <string>

namespace ufd {

/// Bad run description: unknown kinds, out-of-range sizes, missing or
/// contradictory keys. Maps to process exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad scalar argument to an operation (r <= 1, sigma <= 0, alpha outside
/// (1,2], sandwich constants out of order, ...). Also exit code 2.
class ParameterError : public std::runtime_error {
public:
  explicit ParameterError(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched field/grid sizes. Programming error rather than user error.
class DimensionError : public std::logic_error {
public:
  explicit DimensionError(const std::string& what) : std::logic_error(what) {}
};

/// A density lost positivity (or was constructed non-positive).
class PositivityError : public std::runtime_error {
public:
  explicit PositivityError(const std::string& what) : std::runtime_error(what) {}
};

/// Iteration did not converge, a value went non-finite, a time stepper had
/// to give up. Maps to process exit code 3.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// The truncated box is too small to hold a unit of mass; enlarging the
/// domain is the only fix. Exit code 2.
class TruncationError : public ConfigError {
public:
  explicit TruncationError(const std::string& what) : ConfigError(what) {}
};

}  // namespace ufd
