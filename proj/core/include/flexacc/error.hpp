#pragma once

#include <stdexcept>
#include <string>

namespace flexacc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : Error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) +
              ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A value parsed fine but violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Tensor extents disagree with the layer they are paired with.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A tile (or bank demand) does not fit the buffer it is assigned to.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// No configuration survives the feasibility filters.
class SearchSpaceError : public Error {
 public:
  using Error::Error;
};

}  // namespace flexacc
