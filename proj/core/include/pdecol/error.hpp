#pragma once

#include <stdexcept>
#include <string>

namespace pdecol {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A mesh, grid, or run configuration that cannot be used.
class InvalidConfig : public Error {
public:
  using Error::Error;
};

/// Arrays handed to an evaluation routine do not agree in size.
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// A query point lies outside the discretized domain.
class OutOfDomain : public Error {
public:
  using Error::Error;
};

/// An iterative kernel (root finding, factorization) failed to converge.
class NumericalFailure : public Error {
public:
  using Error::Error;
};

#define PDECOL_REQUIRE(cond, ExceptionType, message) \
  do {                                               \
    if (!(cond)) throw ExceptionType(message);       \
  } while (false)

}  // namespace pdecol
