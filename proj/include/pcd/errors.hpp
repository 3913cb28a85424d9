#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pcd {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments, bad configuration, data that violates a precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A column with no nonzero entries cannot be normalized.
class ZeroColumnError : public ValidationError {
 public:
  explicit ZeroColumnError(int column)
      : ValidationError("column " + std::to_string(column) +
                        " has no nonzero entries and cannot be normalized"),
        column(column) {}
  int column;
};

// Malformed file content; `line` is 1-based, 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(std::int64_t line, const std::string& reason)
      : Error("parse error at line " + std::to_string(line) + ": " + reason),
        line(line) {}
  std::int64_t line;
};

// Filesystem-level failure (open, read, write).
class IoError : public Error {
 public:
  using Error::Error;
};

// Non-finite values, diverging iterations, and similar numeric breakdowns.
class NumericError : public Error {
 public:
  using Error::Error;
};

// The power iteration did not converge and the caller required a trusted
// spectral radius.
class UnconvergedRhoError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace pcd
