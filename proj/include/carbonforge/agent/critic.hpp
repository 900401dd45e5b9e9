#pragma once

#include <optional>
#include <string>
#include <vector>

#include "carbonforge/core/inventory.hpp"

namespace carbonforge::agent {

/// Attribute marking a placeholder entry that another document will replace.
inline constexpr const char* kUnresolved = "unresolved";

enum class QueryKind { missing_class, missing_attribute, unresolved_reference };

std::string_view to_string(QueryKind k);

struct CriticQuery {
  QueryKind kind = QueryKind::missing_class;
  /// Lowercase retrieval key: "product|class", "product|class|attribute",
  /// or the placeholder's reference key.
  std::string key;
  /// Natural-language form sent to the answering backend.
  std::string text;
  std::string component_class;
  std::optional<std::string> attribute;

  bool operator==(const CriticQuery&) const = default;
};

bool is_placeholder(const InventoryEntry& e);

/// One query per DA class without entries (DA order), one per (class,
/// required attribute) missing on some non-placeholder entry, one per
/// unresolved placeholder key. Empty iff the inventory is complete.
std::vector<CriticQuery> critique(const LifeCycleInventory& lci, const DataAbstraction& da);

}  // namespace carbonforge::agent
