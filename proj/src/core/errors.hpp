#pragma once

#include <stdexcept>
#include <string>

namespace pehfd {

// Every failure raised by the core derives from Error; the C API maps the
// concrete type onto a status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated operation precondition (bad argument value, wrong unit, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent configuration / manifest content.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Bad recording data or an empty/degenerate data set.
class DataError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pehfd
