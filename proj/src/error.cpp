#include "cocycle_lab/error.hpp"

namespace cocycle_lab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid input";
    case ErrorKind::invalid_parameter: return "invalid parameter";
    case ErrorKind::singular_matrix: return "singular matrix";
    case ErrorKind::undefined_distance: return "undefined distance";
    case ErrorKind::insufficient_context: return "insufficient context";
    case ErrorKind::capacity: return "capacity exceeded";
  }
  return "error";
}

}  // namespace cocycle_lab
