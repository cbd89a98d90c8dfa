#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace drumlab {

/// Malformed expression, map description or config file. Carries the byte
/// offset of the first offending character and what the parser expected.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset,
             std::string expected)
      : std::runtime_error(what + " at byte " + std::to_string(byte_offset) +
                           " (expected " + expected + ")"),
        offset_(byte_offset),
        expected_(std::move(expected)) {}

  std::size_t byte_offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

/// Bad problem description: unknown config key, invalid value, invalid
/// quantum numbers, state outside a truncation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runtime evaluation failure: division by zero, sqrt of a negative value,
/// unbound variable, nonpositive effective density.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The square-to-disk derivative is singular at the four corners of the
/// reference square; callers pick quadrature nodes that avoid them.
class CornerSingularityError : public EvalError {
 public:
  using EvalError::EvalError;
};

/// Numeric failure in the solver: mass matrix not positive definite, basis
/// cap exceeded, request beyond the reliable part of a spectrum.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace drumlab
