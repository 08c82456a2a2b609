#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qapga {

// Bad input data: malformed files, inconsistent dimensions, overflow.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated an operation's precondition (bad index, bad config).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Text position of a parse failure, 1-based.
struct TextPosition {
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, TextPosition pos)
      : DataError(what + " at line " + std::to_string(pos.line) + ", column " +
                  std::to_string(pos.column)),
        pos_(pos) {}

  TextPosition position() const noexcept { return pos_; }

 private:
  TextPosition pos_;
};

}  // namespace qapga
