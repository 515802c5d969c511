#pragma once

#include <stdexcept>
#include <string>

namespace privmine {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad parameters, malformed input content, violated preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Filesystem / stream failures.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace privmine
