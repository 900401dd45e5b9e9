#include "carbonforge/core/error.hpp"

namespace carbonforge {

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

void throw_data_error(const std::string& message) {
  throw Error(ErrorKind::data, message);
}

void throw_usage_error(const std::string& message) {
  throw Error(ErrorKind::usage, message);
}

void throw_backend_error(const std::string& message) {
  throw Error(ErrorKind::backend, message);
}

}  // namespace carbonforge
