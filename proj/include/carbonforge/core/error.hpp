#pragma once

#include <stdexcept>
#include <string>

namespace carbonforge {

/// Failure classes. The CLI maps them onto exit codes 1, 2 and 3.
enum class ErrorKind { usage, data, backend };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void throw_data_error(const std::string& message);
[[noreturn]] void throw_usage_error(const std::string& message);
[[noreturn]] void throw_backend_error(const std::string& message);

}  // namespace carbonforge
