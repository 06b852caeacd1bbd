#pragma once

#include <stdexcept>
#include <string>

namespace degenkit {

/// Base class of every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Inputs of mismatched ambient dimension.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
struct PreconditionError : Error {
  using Error::Error;
};

/// Malformed serialized input.
struct ParseError : Error {
  using Error::Error;
};

} // namespace degenkit
