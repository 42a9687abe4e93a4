#pragma once

#include <stdexcept>
#include <string>

namespace osnorm {

/// Base of every error thrown by the library. The CLI maps all of these to
/// exit code 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

/// A numeric parameter (p, theta, a norm bound, ...) is out of range.
struct ParameterError : Error {
  using Error::Error;
};

/// The operation does not apply to the given structure or candidate.
struct UsageError : Error {
  using Error::Error;
};

/// A requested size exceeds a hard cap.
struct SizeError : Error {
  using Error::Error;
};

struct PreconditionError : Error {
  using Error::Error;
};

} // namespace osnorm
