#pragma once

#include <stdexcept>
#include <string>

namespace censorlens {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates a documented range or precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A file or directory could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

/// The requested state transition is not allowed from the current state.
class Conflict : public Error {
 public:
  using Error::Error;
};

}  // namespace censorlens
