#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hullkit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct SingularError : Error {
  using Error::Error;
};

// Raised when a point set (or candidate facet subset) is affinely dependent.
struct DegenerateError : Error {
  using Error::Error;
};

struct IndexError : Error {
  using Error::Error;
};

struct TooFewPoints : Error {
  using Error::Error;
};

struct InfeasibleStart : Error {
  using Error::Error;
};

struct EmptyInterior : Error {
  using Error::Error;
};

struct TimeoutError : Error {
  using Error::Error;
};

struct IterationLimitError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct SchemaError : Error {
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

}  // namespace hullkit
