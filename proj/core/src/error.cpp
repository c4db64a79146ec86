#include "lotva/error.hpp"

namespace lotva {

ParseError::ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& what)
    : Error("line " + std::to_string(line) + (column ? ":" + std::to_string(column) : std::string{}) + ": " + what),
      kind_(kind),
      line_(line),
      column_(column) {}

}  // namespace lotva
