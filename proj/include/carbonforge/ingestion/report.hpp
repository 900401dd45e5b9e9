#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace carbonforge::ingest {

/// A rejected input row. Rows are never dropped silently.
struct RowReport {
  std::size_t line = 0;
  std::string message;

  bool operator==(const RowReport&) const = default;
};

template <typename T>
struct ParseResult {
  std::vector<T> records;
  std::vector<RowReport> rejected;
};

inline void to_json(nlohmann::json& j, const RowReport& r) {
  j = nlohmann::json{{"line", r.line}, {"message", r.message}};
}

}  // namespace carbonforge::ingest
