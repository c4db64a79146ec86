#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lotva {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Line and column are 1-based; column 0 means the
// problem is not tied to a particular token.
class ParseError : public Error {
 public:
  enum class Kind { syntax, unknown_vertex, duplicate_edge, self_loop, unknown_name };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& what);

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

// A value violates the invariants of the type it is being turned into.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Something that cannot happen on valid input happened.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace lotva
