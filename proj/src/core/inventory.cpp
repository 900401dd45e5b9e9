#include "carbonforge/core/inventory.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "carbonforge/core/error.hpp"

namespace carbonforge {

std::string_view to_string(Unit unit) {
  switch (unit) {
    case Unit::count: return "count";
    case Unit::gram: return "gram";
    case Unit::mm2: return "mm2";
    case Unit::kWh: return "kWh";
  }
  return "count";
}

std::optional<Unit> try_parse_unit(std::string_view text) {
  if (text == "count") return Unit::count;
  if (text == "gram") return Unit::gram;
  if (text == "mm2") return Unit::mm2;
  if (text == "kWh") return Unit::kWh;
  return std::nullopt;
}

Unit parse_unit(std::string_view text) {
  if (auto u = try_parse_unit(text)) return *u;
  throw_data_error("unit '" + std::string(text) + "' is not one of count, gram, mm2, kWh");
}

DataAbstraction::DataAbstraction(std::string product_class,
                                 std::vector<std::string> component_classes,
                                 std::map<std::string, std::vector<std::string>> required_attributes)
    : product_class_(std::move(product_class)),
      classes_(std::move(component_classes)),
      required_(std::move(required_attributes)) {
  if (classes_.empty()) throw_data_error("data abstraction has no component classes");
  std::set<std::string> seen;
  for (const auto& c : classes_) {
    if (c.empty()) throw_data_error("data abstraction has an empty component class");
    if (!seen.insert(c).second) {
      throw_data_error("data abstraction repeats component class '" + c + "'");
    }
  }
  std::set<std::string> attrs;
  for (const auto& [cls, names] : required_) {
    if (!seen.contains(cls)) {
      throw_data_error("required attributes given for unknown class '" + cls + "'");
    }
    for (const auto& name : names) {
      if (!attrs.insert(name).second) {
        throw_data_error("attribute '" + name + "' is required by more than one class");
      }
    }
  }
}

bool DataAbstraction::contains(std::string_view component_class) const {
  return std::find(classes_.begin(), classes_.end(), component_class) != classes_.end();
}

const std::vector<std::string>& DataAbstraction::required_for(
    std::string_view component_class) const {
  static const std::vector<std::string> none;
  auto it = required_.find(std::string(component_class));
  return it == required_.end() ? none : it->second;
}

std::vector<Violation> validate_inventory(const LifeCycleInventory& lci) {
  std::vector<Violation> out;
  if (!lci.provenance.empty() && lci.provenance.size() != lci.entries.size()) {
    out.push_back({std::nullopt, "provenance has " + std::to_string(lci.provenance.size()) +
                                     " tags for " + std::to_string(lci.entries.size()) +
                                     " entries"});
  }
  for (std::size_t i = 0; i < lci.entries.size(); ++i) {
    const auto& e = lci.entries[i];
    const std::string where = "entry " + std::to_string(i) + " ('" + e.description + "')";
    if (!lci.da.contains(e.component_class)) {
      out.push_back({i, where + ": class '" + e.component_class +
                            "' is outside the data abstraction for '" +
                            lci.da.product_class() + "'"});
    }
    if (!std::isfinite(e.quantity) || e.quantity < 0.0) {
      out.push_back({i, where + ": quantity must be a finite non-negative number"});
    }
  }
  return out;
}

}  // namespace carbonforge
