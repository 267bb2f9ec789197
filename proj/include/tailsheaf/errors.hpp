#pragma once

#include <stdexcept>
#include <string>

namespace tailsheaf {

// Base of everything the library throws on bad input or broken invariants.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// A presentation that parses but violates degree, minimality or injectivity rules.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its domain (non-tail input, singular matrix, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Two independent computations disagreed; always a bug or a corrupted input.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace tailsheaf
