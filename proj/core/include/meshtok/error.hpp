#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace meshtok {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (OBJ files, symbol streams, vocab files).
/// `line()` is 1-based, 0 when the location is unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A token or symbol stream that does not decode under strict rules.
class DecodeError : public Error {
 public:
  using Error::Error;
};

}  // namespace meshtok
