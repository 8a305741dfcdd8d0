#pragma once

#include <stdexcept>
#include <string>

namespace lps {

enum class ErrorKind {
  invalid_input,
  unsupported_exponent,
  undefined_derivative,
  singular_point,
  not_positive_definite,
  rank_deficient,
  invalid_index,
  capacity,
};

const char* to_string(ErrorKind kind) noexcept;

/// Exception carrying a machine-checkable kind alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lps
