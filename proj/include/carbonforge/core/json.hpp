#pragma once

// Canonical JSON forms of the core types. Field names follow the type
// definitions; MISSING feature values serialize as null.

#include <json.hpp>

#include "carbonforge/core/estimate.hpp"
#include "carbonforge/core/feature_vector.hpp"
#include "carbonforge/core/inventory.hpp"
#include "carbonforge/core/records.hpp"

namespace carbonforge {

using nlohmann::json;

FeatureValue feature_value_from_json(const json& j);

void to_json(json& j, const FeatureSchema& s);
void from_json(const json& j, FeatureSchema& s);

/// {name: value|null} for every schema slot.
json values_to_json(const FeatureVector& v);
/// Inverse of values_to_json against a known schema; absent keys are MISSING.
FeatureVector values_from_json(const SchemaPtr& schema, const json& j);

void to_json(json& j, Unit u);
void from_json(const json& j, Unit& u);

void to_json(json& j, const InventoryEntry& e);
void from_json(const json& j, InventoryEntry& e);

void to_json(json& j, const EmissionFactor& ef);
void from_json(const json& j, EmissionFactor& ef);

void to_json(json& j, const ProductRecord& r);
void from_json(const json& j, ProductRecord& r);

void to_json(json& j, const Neighbor& n);
void from_json(const json& j, Neighbor& n);

void to_json(json& j, const EntryContribution& c);
void from_json(const json& j, EntryContribution& c);

void to_json(json& j, const Violation& v);

/// Parses a document and reports failures as data errors.
json parse_json_text(std::string_view text, std::string_view what);

}  // namespace carbonforge

namespace nlohmann {

template <>
struct adl_serializer<carbonforge::FeatureValue> {
  static void to_json(json& j, const carbonforge::FeatureValue& v);
  static carbonforge::FeatureValue from_json(const json& j);
};

template <>
struct adl_serializer<carbonforge::FeatureVector> {
  static void to_json(json& j, const carbonforge::FeatureVector& v);
  static carbonforge::FeatureVector from_json(const json& j);
};

template <>
struct adl_serializer<carbonforge::DataAbstraction> {
  static void to_json(json& j, const carbonforge::DataAbstraction& da);
  static carbonforge::DataAbstraction from_json(const json& j);
};

template <>
struct adl_serializer<carbonforge::LifeCycleInventory> {
  static void to_json(json& j, const carbonforge::LifeCycleInventory& lci);
  static carbonforge::LifeCycleInventory from_json(const json& j);
};

template <>
struct adl_serializer<carbonforge::EstimateDistribution> {
  static void to_json(json& j, const carbonforge::EstimateDistribution& e);
  static carbonforge::EstimateDistribution from_json(const json& j);
};

template <>
struct adl_serializer<carbonforge::CFBreakdown> {
  static void to_json(json& j, const carbonforge::CFBreakdown& b);
  static carbonforge::CFBreakdown from_json(const json& j);
};

}  // namespace nlohmann
