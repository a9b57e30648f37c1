#pragma once

#include <stdexcept>
#include <string>

namespace pqlab {

// Failure categories surfaced as CLI exit codes.
enum class ErrorCategory {
  kConfig = 1,     // bad arguments, unsupported parameters
  kIo = 2,         // file system failures
  kFormat = 3,     // malformed or truncated input data
  kIntegrity = 4,  // codec closed-loop violation
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }
  int exit_code() const { return static_cast<int>(category_); }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void throw_config(const std::string& msg) { throw Error(ErrorCategory::kConfig, msg); }
[[noreturn]] inline void throw_io(const std::string& msg) { throw Error(ErrorCategory::kIo, msg); }
[[noreturn]] inline void throw_format(const std::string& msg) { throw Error(ErrorCategory::kFormat, msg); }
[[noreturn]] inline void throw_integrity(const std::string& msg) { throw Error(ErrorCategory::kIntegrity, msg); }

}  // namespace pqlab
