#pragma once

#include <stdexcept>
#include <string>

namespace dclust {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside its documented domain (negative noise, gamma <= 0, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Shapes of two operands disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The input is valid in shape but degenerate for the operation
/// (zero-variance column, empty cluster, isolated graph vertex).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A computation produced NaN/Inf or an iterative solver failed.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// File could not be read, written or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dclust
