#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace invar {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched contexts, bad parameters, violated preconditions.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Division by zero and friends.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

// A term, pair, exponent or enumeration guard was hit.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at offset " + std::to_string(position) + ")"),
        message_(what),
        position_(position) {}

  // The description without the offset suffix.
  const std::string& message() const noexcept { return message_; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::string message_;
  std::size_t position_;
};

}  // namespace invar
