#pragma once

#include <stdexcept>
#include <string>

namespace graphsmooth {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vertex degree fell at or below the configured floor, so the mean
/// aggregation operator D^{-1} A is not defined.
class DegenerateDegreeError : public Error {
 public:
  using Error::Error;
};

/// A symmetric eigendecomposition did not converge.
class EigenDecompositionError : public Error {
 public:
  using Error::Error;
};

/// A linear solve produced a non-finite result or the factorization failed.
class SolveError : public Error {
 public:
  using Error::Error;
};

/// A configuration does not belong to the family an operation supports.
class ConfigMismatchError : public Error {
 public:
  using Error::Error;
};

/// Matrix or vector shapes do not line up.
class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// An edge references a node id outside the declared node set.
class UnknownNodeIdError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A text input failed to parse; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, long line, const std::string& message)
      : Error(file + ":" + std::to_string(line) + ": " + message), line_(line) {}

  long line() const noexcept { return line_; }

 private:
  long line_;
};

}  // namespace graphsmooth
