#pragma once

#include <stdexcept>
#include <string>

namespace ddh {

// Base class for every error raised by the library. The CLI maps any of these
// to a one-line diagnostic and a nonzero exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad magic, unsupported version, truncated header.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Parsable input whose values violate a type invariant (NaN, ragged rows, zero rows).
class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Dimension or code-length mismatch between operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Non-finite objective during training.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Caller broke a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace ddh
