#pragma once

#include <stdexcept>
#include <string>

namespace bosestab {

// Input violates a physical or numerical precondition (bad grid, unresolved
// interaction, failed assumption check). The CLI maps this to exit code 3.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bosestab
