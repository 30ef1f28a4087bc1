#pragma once

#include <stdexcept>
#include <string>

namespace dyncap {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input (CLI exit code 1).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A point excluded from an operation's domain, e.g. the origin of C_v^2.
class DomainError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// An iterative numerical method failed to converge (CLI exit code 2).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Exact arithmetic would exceed a configured size cap (CLI exit code 2).
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace dyncap
