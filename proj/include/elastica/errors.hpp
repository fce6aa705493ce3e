#pragma once

#include <stdexcept>
#include <string>

namespace elastica {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A direct solve hit a pivot below the singularity guard.
class SingularMatrixError : public Error {
public:
  SingularMatrixError(const std::string& what, int pivot_index)
      : Error(what), pivot_index(pivot_index) {}
  int pivot_index;
};

/// A nonlinear solve could not be carried out (distinct from a clean
/// "did not converge" result, which is reported via flags).
class SolveError : public Error {
public:
  using Error::Error;
};

/// Invalid configuration or arguments; the message names the offending key.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace elastica
