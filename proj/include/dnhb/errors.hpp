#ifndef DNHB_ERRORS_HPP
#define DNHB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dnhb {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Incompatible matrix/vector dimensions. Messages name both shapes.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Invalid system or experiment configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Non-finite values, degenerate inputs, diverged training.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

// File read/write failures.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// Malformed file contents (JSON/CSV), with field context in the message.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

}  // namespace dnhb

#endif  // DNHB_ERRORS_HPP
