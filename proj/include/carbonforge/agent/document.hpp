#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "carbonforge/core/inventory.hpp"

namespace carbonforge::agent {

/// One structured line of a text document:
///   entry <class> | description | quantity | unit | key=value; key=value
///   attr <class> | name = value
///   ref <class> | description | key     (placeholder to be resolved)
///   resolves <key>                      (drops that placeholder)
/// Anything else is prose and ignored.
struct DocLine {
  enum class Kind { entry, attribute, reference, resolves } kind;
  InventoryEntry entry;       // entry, reference
  std::string attribute;      // attribute
  FeatureValue value;         // attribute
  std::string key;            // reference, resolves
};

/// Malformed structured lines throw a data error naming the line.
std::vector<DocLine> parse_document(std::string_view text);

/// Numbers become numeric values, anything else a label.
FeatureValue parse_value(std::string_view text);

}  // namespace carbonforge::agent
