#pragma once

#include <stdexcept>
#include <string>

namespace chaoslab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller broke an operation's precondition (order mismatch, r out of range, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid tensor data: indices out of range, unsorted, duplicated.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

/// Zero kernel, zero denominator and similar degenerate inputs.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// A combinatorial size guard was exceeded.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// Failure while reading a kernel file or vector manifest. The message names
/// the file and, when applicable, the offending entry.
class IngestionError : public Error {
 public:
  using Error::Error;
};

}  // namespace chaoslab
