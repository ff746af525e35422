#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netglm {

// Invalid input data or model specification. The CLI maps it to its own exit code.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax or semantic problem in a formula string; carries the byte offset.
class FormulaError : public ValidationError {
 public:
  FormulaError(const std::string& what, std::size_t offset)
      : ValidationError(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace netglm
