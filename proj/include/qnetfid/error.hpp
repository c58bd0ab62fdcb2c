#pragma once

#include <stdexcept>
#include <string>

namespace qnetfid {

/// Bad parameter or topology description (CLI exit code 2).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// File could not be opened, read, or written (CLI exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Graph violates a Network invariant: disconnected, self-loop, duplicate
/// edge, weight outside [0,1] (CLI exit code 4).
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Edge-list text could not be parsed. `line()` is 1-based.
class ParseError : public GraphError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : GraphError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An enumeration would exceed its configured cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qnetfid
