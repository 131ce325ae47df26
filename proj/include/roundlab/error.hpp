#pragma once

#include <stdexcept>
#include <string>

namespace rl {

// Numeric values double as CLI exit codes.
enum class ErrorCode : int {
  kInfeasible = 2,
  kInvalidInput = 3,
  kContractViolation = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::kInvalidInput, message);
}

inline void ensure(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::kContractViolation, message);
}

}  // namespace rl
