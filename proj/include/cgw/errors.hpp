#pragma once

#include <stdexcept>
#include <string>

namespace cgw {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid argument or precondition violation (bad root type, height bound, ...).
struct DomainError : Error {
  using Error::Error;
};

/// Operation requires a finite-support offspring law (or an exact-arithmetic
/// compatible model) and the given model cannot provide one.
struct UnsupportedModelError : Error {
  using Error::Error;
};

/// Conditioning on a class whose probability is zero.
struct ImpossibleEventError : Error {
  using Error::Error;
};

/// Tree enumeration would exceed the configured guard; message carries the
/// size estimate.
struct EnumerationLimitError : Error {
  using Error::Error;
};

/// A predicate set failed the exactly-one-holds partition property.
struct NotAPartitionError : Error {
  using Error::Error;
};

/// Config file parsing or validation failure; message is line-anchored.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace cgw
