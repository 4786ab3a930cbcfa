#pragma once

#include <stdexcept>
#include <string>

namespace driftrec {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input stream: bad magic/header, reject rate exceeded, corrupt archive.
struct ParseError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

// Lookup of an entity that does not exist (e.g. unknown user id).
struct NotFoundError : Error {
  using Error::Error;
};

// A structural precondition of an operation does not hold (too few folds,
// no eligible users, no baskets to mine, ...).
struct PreconditionError : Error {
  using Error::Error;
};

}  // namespace driftrec
