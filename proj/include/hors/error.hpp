#pragma once

#include <stdexcept>
#include <string>

namespace hors {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An application whose argument does not fit the head's type, or a
/// substitution / replacement whose types disagree.
class TypeMismatch : public Error {
 public:
  TypeMismatch(std::string where, const std::string& what)
      : Error(where.empty() ? what : what + " at " + where),
        where_(std::move(where)) {}

  /// Position of the offending subterm, rendered (`ε` for the root).
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

class InvalidPosition : public Error {
 public:
  using Error::Error;
};

class IncompatibleLabels : public Error {
 public:
  IncompatibleLabels(std::string where, const std::string& what)
      : Error(what + " at " + where), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

class SchemeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class NotARedex : public Error {
 public:
  using Error::Error;
};

class PolicyViolation : public Error {
 public:
  using Error::Error;
};

/// Raised when an intersection-type space is too large to enumerate.
class ComplexityLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace hors
