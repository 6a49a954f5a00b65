#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace invpsh {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad model parameters, bad shadow boxes, bad config.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Expression syntax error. `position` is the 0-based character offset.
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : ConfigError(msg + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A point lies outside the domain where the requested quantity is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation produced a non-finite value or failed to converge.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

}  // namespace invpsh
