#pragma once

#include <stdexcept>
#include <string>

namespace prol {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter (negative degree, alpha <= -1, K < 2, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The truncation loop did not find a size whose eigenvector tails are small.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver breakdown (singular shifts that survive perturbation, NaNs).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A ratio or sum whose denominator vanished numerically.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimensionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace prol
