#pragma once

#include <stdexcept>
#include <string>

namespace minirocket {

enum class ErrorCode {
  invalid_argument,
  invalid_kernel,
  unsupported_length,
  empty_input,
  length_mismatch,
  layout_mismatch,
  dimension_mismatch,
  single_class,
  non_finite,
  parse_error,
  io_error,
  format_error,
};

const char* to_string(ErrorCode code) noexcept;

/// Every recoverable failure in the library surfaces as this exception.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace minirocket
