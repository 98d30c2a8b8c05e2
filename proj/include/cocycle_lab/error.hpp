#pragma once

#include <stdexcept>
#include <string>

namespace cocycle_lab {

enum class ErrorKind {
  invalid_input,
  invalid_parameter,
  singular_matrix,
  undefined_distance,
  insufficient_context,
  capacity,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cocycle_lab
