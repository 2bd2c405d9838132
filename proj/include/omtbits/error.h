#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace omtbits {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourceLoc {
  std::size_t line = 0;
  std::size_t column = 0;
};

/// Lexical, syntactic, or sort error raised while reading SMT-LIB text.
class ParseError : public Error {
 public:
  ParseError(SourceLoc loc, const std::string& what)
      : Error(std::to_string(loc.line) + ":" + std::to_string(loc.column) +
              ": " + what),
        loc_(loc) {}

  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

class SortError : public Error {
 public:
  using Error::Error;
};

/// An operator outside the supported fragment reached the bit-blaster.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace omtbits
