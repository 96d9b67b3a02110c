#pragma once

#include <stdexcept>
#include <string>

namespace gln {

// Numeric failure during evaluation: domain violations, non-finite values.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent shapes, orders or arguments supplied by the caller.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Unreadable or malformed input files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gln
