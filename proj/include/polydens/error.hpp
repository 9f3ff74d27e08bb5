#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polydens {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed polynomial text. `position` is a 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// An operation's precondition does not hold (zero polynomial, dimension
/// mismatch, modulus of the wrong shape, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested work exceeds the configured enumeration budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A convergence or theorem hypothesis is violated and no force flag was set.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace polydens
