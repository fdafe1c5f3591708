#pragma once

#include <stdexcept>
#include <string>

namespace vofrac {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (poles of Gamma, order outside its class range, support mismatch, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A series hit its term budget before the stopping rule fired.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Malformed input that is not a numerical domain problem (bad sizes, unknown
/// identifiers, zero trial counts).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace vofrac
