#pragma once

#include <stdexcept>
#include <string>

namespace xylab {

// Base for everything the library throws on purpose. The CLI maps each
// subclass to its exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// Requested system size exceeds the dense or iterative solver limits.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Root bracket could not be established within the allowed temperature range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// A state that should carry a definite parity does not.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace xylab
