#include "lps/error.hpp"

namespace lps {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::unsupported_exponent: return "unsupported-exponent";
    case ErrorKind::undefined_derivative: return "undefined-derivative";
    case ErrorKind::singular_point: return "singular-point";
    case ErrorKind::not_positive_definite: return "not-positive-definite";
    case ErrorKind::rank_deficient: return "rank-deficient";
    case ErrorKind::invalid_index: return "invalid-index";
    case ErrorKind::capacity: return "capacity";
  }
  return "unknown";
}

}  // namespace lps
