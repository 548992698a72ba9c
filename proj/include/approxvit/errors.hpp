#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace approxvit {

// Root of every error the library throws on bad input or configuration.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand or argument outside the operation's domain.
class InputError : public Error {
 public:
  using Error::Error;
};

// Constructor parameter outside its admissible range (e.g. k > n).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Request too large to honor (exhaustive enumeration over too many pairs).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Stream length not a multiple of the symbol/frame size.
class FramingError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ExplorationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Parse failure tied to a 1-based line (netlists) or row (CSV) number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what),
        line_(line),
        message_(what) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::string message_;
};

}  // namespace approxvit
