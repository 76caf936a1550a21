#pragma once

#include <stdexcept>
#include <string>

namespace mbt {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a structural precondition (dimensions, sentinels, invariants).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A linear-algebra step failed (singular generator, non-finite result).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Survival probability fell below the representable range.
class UnderflowError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A requested size exceeds a configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class IterationError : public Error {
 public:
  IterationError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// No multi-start seed converged.
class OptimizationError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace mbt
