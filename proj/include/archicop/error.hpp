#pragma once

#include <stdexcept>
#include <string>

namespace archicop {

/// Failure categories. The numeric values are shared with the C API status
/// codes in archicop.h and must stay in sync.
enum class ErrorCode : int {
  invalid_parameter = 1,
  domain = 2,
  numerical = 3,
  not_d_monotone = 4,
  no_density = 5,
  non_identifiable = 6,
  io = 7,
  internal = 8,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace archicop
