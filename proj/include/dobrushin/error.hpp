#pragma once

#include <stdexcept>
#include <string>

namespace dobrushin {

// Stable numeric values: they double as CLI exit codes and C API status codes.
enum class ErrorCode : int {
  Ok = 0,
  Internal = 1,
  Parse = 2,
  Infeasible = 3,
  TooLarge = 4,
  Io = 5,
  ValidationFailed = 6,
  InvalidArgument = 7,
  InvalidInterface = 8,
  Inadmissible = 9,
  AuditMismatch = 10,
  ThresholdNotCrossed = 11,
  NoSuccesses = 12,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dobrushin
