#pragma once

#include <stdexcept>
#include <string>

namespace cylcert {

/// Base class of everything the engine throws. A thrown Error always means an
/// input violated a precondition or an internal certificate failed to verify.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different variable contexts.
class ContextError : public Error {
 public:
  using Error::Error;
};

/// An element that had to be invertible was not.
class NotUnitError : public Error {
 public:
  using Error::Error;
};

/// Exact division left a remainder.
class DivisionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A certificate identity did not hold when re-expanded.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace cylcert
