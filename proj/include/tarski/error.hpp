#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tarski {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checked matrix arithmetic left the 64-bit range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A configured size guardrail (vertex budget, enumeration limit) was hit.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Caller violated an operation precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `column` is 1-based; 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line,
                            std::size_t column) {
    return "parse error at " + std::to_string(line) + ":" +
           std::to_string(column) + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

}  // namespace tarski
