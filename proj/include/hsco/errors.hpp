#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hsco {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A point or coefficient vector has the wrong arity for the object it meets.
struct DimensionMismatch : Error {
  using Error::Error;
};

// Target weight parameter out of range (beta <= -1 after pairing).
struct InvalidWeight : Error {
  using Error::Error;
};

// Operation asked of a space kind that has no such closed form.
struct UnsupportedSpace : Error {
  using Error::Error;
};

// (space, operator) pair with no characterization in scope.
struct UnsupportedPairing : Error {
  using Error::Error;
};

// An integrand produced NaN/Inf at a quadrature node.
struct NonFiniteSample : Error {
  using Error::Error;
};

// Job-level rejection: inconsistent dimensions, bad parameters, out-of-scope requests.
struct ValidationError : Error {
  using Error::Error;
};

// Malformed job/report document (missing keys, wrong JSON types).
struct SchemaError : Error {
  using Error::Error;
};

// Expression text rejected; offset is the byte position of the offending token.
struct ParseError : Error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t at)
      : Error(msg + " (at byte " + std::to_string(at) + ")"), offset(at) {}
};

struct UnknownVariable : ParseError {
  using ParseError::ParseError;
};

struct ExponentOverflow : ParseError {
  using ParseError::ParseError;
};

}  // namespace hsco
