#pragma once

#include <stdexcept>
#include <string>

namespace abdirac {

// Base class for every error raised by the library. The CLI maps
// InvalidParameter/UsageError to exit code 2 and everything else to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Caller asked for something that is well-formed but not meaningful,
// e.g. r >= s in a Weber-Schafheitlin evaluation.
class UsageError : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DivergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

class RangeError : public DomainError {
 public:
  using DomainError::DomainError;
};

class AliasingError : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace abdirac
