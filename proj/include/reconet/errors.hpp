#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace reconet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown vertex or arc identifier.
class IdentifierError : public Error {
 public:
  using Error::Error;
};

// Input graph has the wrong shape for the requested operation (e.g. not a tree).
class StructureError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A size limit (path count, search space) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace reconet
