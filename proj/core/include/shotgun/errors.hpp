#pragma once

#include <stdexcept>
#include <string>

namespace shotgun {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class OutOfBounds : public Error {
 public:
  using Error::Error;
};

class ConfigMismatch : public Error {
 public:
  using Error::Error;
};

// Raised when an operation is called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

// Malformed bytes in a pattern encoding, shard file or labeling file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace shotgun
