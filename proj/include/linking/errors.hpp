#pragma once

#include <stdexcept>
#include <string>

namespace linking {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ambient dimensions, column counts or k + l = n - 1 do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two submanifolds come too close to each other (or to the antipodal image).
class DisjointnessError : public Error {
 public:
  using Error::Error;
};

/// A quadrature node produced a non-finite integrand value.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

}  // namespace linking
