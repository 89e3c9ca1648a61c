#include "gwpdyn/errors.hpp"

namespace gwp {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::invalid_state: return "invalid_state";
    case ErrorCode::not_normalized: return "not_normalized";
    case ErrorCode::degenerate_pair: return "degenerate_pair";
    case ErrorCode::substep_too_large: return "substep_too_large";
    case ErrorCode::range: return "range";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace gwp
