#include "archicop/error.hpp"

namespace archicop {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_parameter: return "invalid_parameter";
    case ErrorCode::domain: return "domain";
    case ErrorCode::numerical: return "numerical";
    case ErrorCode::not_d_monotone: return "not_d_monotone";
    case ErrorCode::no_density: return "no_density";
    case ErrorCode::non_identifiable: return "non_identifiable";
    case ErrorCode::io: return "io";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace archicop
