#pragma once

#include <stdexcept>
#include <string>

namespace morse_concordance {

// Exception carrying a stable machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(detail), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Raised when a postcondition the library asserts internally does not hold.
// Seeing one means a bug in this library, not bad input.
class InternalConsistencyError : public Error {
 public:
  explicit InternalConsistencyError(const std::string& detail)
      : Error("internal_consistency", detail) {}
};

}  // namespace morse_concordance
