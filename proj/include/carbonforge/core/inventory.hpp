#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carbonforge/core/feature_vector.hpp"

namespace carbonforge {

/// Closed unit set. Conversion between units is the ingester's job.
enum class Unit { count, gram, mm2, kWh };

std::string_view to_string(Unit unit);
std::optional<Unit> try_parse_unit(std::string_view text);
Unit parse_unit(std::string_view text);

/// Component-class vocabulary that bounds a valid inventory for one product
/// class.
class DataAbstraction {
 public:
  /// Throws when component_classes is empty or has duplicates, when a
  /// required-attribute key is not a component class, or when one attribute
  /// name is required by two classes.
  DataAbstraction(std::string product_class, std::vector<std::string> component_classes,
                  std::map<std::string, std::vector<std::string>> required_attributes = {});

  const std::string& product_class() const noexcept { return product_class_; }
  const std::vector<std::string>& component_classes() const noexcept { return classes_; }
  const std::map<std::string, std::vector<std::string>>& required_attributes() const noexcept {
    return required_;
  }

  bool contains(std::string_view component_class) const;
  /// Required attributes of one class (empty if none).
  const std::vector<std::string>& required_for(std::string_view component_class) const;

  bool operator==(const DataAbstraction&) const = default;

 private:
  std::string product_class_;
  std::vector<std::string> classes_;
  std::map<std::string, std::vector<std::string>> required_;
};

struct InventoryEntry {
  std::string component_class;
  std::string description;
  double quantity = 0.0;
  Unit unit = Unit::count;
  std::map<std::string, FeatureValue> attributes;

  bool operator==(const InventoryEntry&) const = default;
};

inline constexpr std::string_view kAgentInferred = "agent-inferred";

/// Inventory rows are plain data so that invalid inventories stay
/// representable; validate_inventory reports what is wrong with them.
struct LifeCycleInventory {
  std::string product;
  DataAbstraction da;
  std::vector<InventoryEntry> entries;
  /// Source tag per entry: a document id or "agent-inferred".
  std::vector<std::string> provenance;

  bool operator==(const LifeCycleInventory&) const = default;
};

struct Violation {
  std::optional<std::size_t> entry_index;
  std::string message;

  bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate_inventory(const LifeCycleInventory& lci);

}  // namespace carbonforge
