#pragma once

#include <stdexcept>

namespace langprop {

// Malformed input data; the message carries file/line context.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An input violates a documented precondition or invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace langprop
