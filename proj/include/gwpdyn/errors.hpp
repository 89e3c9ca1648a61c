#pragma once

#include <stdexcept>
#include <string>

namespace gwp {

enum class ErrorCode {
  invalid_argument = 1,
  invalid_state,
  not_normalized,
  degenerate_pair,
  substep_too_large,
  range,
  unsupported,
  config,
  io,
};

const char* error_code_name(ErrorCode code) noexcept;

// All library failures are reported through this exception. `key` carries the
// configuration key path for config errors and is empty otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string key = {})
      : std::runtime_error(message), code_(code), key_(std::move(key)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& key() const noexcept { return key_; }

 private:
  ErrorCode code_;
  std::string key_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace gwp
