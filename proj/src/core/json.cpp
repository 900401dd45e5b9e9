#include "carbonforge/core/json.hpp"

#include "carbonforge/core/error.hpp"

namespace carbonforge {

namespace {

template <typename T>
T required(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw_data_error(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw_data_error(std::string("field '") + key + "': " + e.what());
  }
}

std::map<std::string, FeatureValue> attributes_from_json(const json& j) {
  std::map<std::string, FeatureValue> out;
  if (j.is_null()) return out;
  if (!j.is_object()) throw_data_error("attributes must be an object");
  for (const auto& [k, v] : j.items()) out.emplace(k, feature_value_from_json(v));
  return out;
}

json attributes_to_json(const std::map<std::string, FeatureValue>& attrs) {
  json j = json::object();
  for (const auto& [k, v] : attrs) j[k] = v;
  return j;
}

}  // namespace

FeatureValue feature_value_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw_data_error("feature value must be a number or a string, got " + j.dump());
}

void to_json(json& j, const FeatureSchema& s) {
  j = json::array();
  for (const auto& spec : s.specs()) {
    j.push_back({{"name", spec.name}, {"kind", std::string(to_string(spec.kind))}});
  }
}

void from_json(const json& j, FeatureSchema& s) {
  if (!j.is_array()) throw_data_error("schema must be an array");
  std::vector<FeatureSpec> specs;
  for (const auto& item : j) {
    specs.push_back({required<std::string>(item, "name"),
                     parse_feature_kind(required<std::string>(item, "kind"))});
  }
  s = FeatureSchema(std::move(specs));
}

json values_to_json(const FeatureVector& v) {
  json j = json::object();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i]) {
      j[v.schema()[i].name] = *v[i];
    } else {
      j[v.schema()[i].name] = nullptr;
    }
  }
  return j;
}

FeatureVector values_from_json(const SchemaPtr& schema, const json& j) {
  if (!j.is_object()) throw_data_error("feature values must be an object");
  std::vector<MaybeFeature> slots(schema->size());
  for (const auto& [name, value] : j.items()) {
    auto idx = schema->index_of(name);
    if (!idx) throw_data_error("feature '" + name + "' is not in the schema");
    if (!value.is_null()) slots[*idx] = feature_value_from_json(value);
  }
  return FeatureVector(schema, std::move(slots));
}

void to_json(json& j, Unit u) { j = std::string(to_string(u)); }

void from_json(const json& j, Unit& u) {
  if (!j.is_string()) throw_data_error("unit must be a string");
  u = parse_unit(j.get<std::string>());
}

void to_json(json& j, const InventoryEntry& e) {
  j = json{{"component_class", e.component_class},
           {"description", e.description},
           {"quantity", e.quantity},
           {"unit", e.unit},
           {"attributes", attributes_to_json(e.attributes)}};
}

void from_json(const json& j, InventoryEntry& e) {
  e.component_class = required<std::string>(j, "component_class");
  e.description = j.value("description", std::string{});
  e.quantity = required<double>(j, "quantity");
  e.unit = required<Unit>(j, "unit");
  e.attributes = attributes_from_json(j.value("attributes", json::object()));
}

void to_json(json& j, const EmissionFactor& ef) {
  j = json{{"id", ef.id},
           {"description", ef.description},
           {"isic_class", ef.isic_class},
           {"unit", ef.unit},
           {"kgco2e_per_unit", ef.kgco2e_per_unit},
           {"features", ef.features}};
}

void from_json(const json& j, EmissionFactor& ef) {
  ef.id = required<std::string>(j, "id");
  ef.description = j.value("description", std::string{});
  ef.isic_class = j.value("isic_class", std::string{});
  ef.unit = required<Unit>(j, "unit");
  ef.kgco2e_per_unit = required<double>(j, "kgco2e_per_unit");
  if (j.contains("features") && !j.at("features").is_null()) {
    ef.features = j.at("features").get<FeatureVector>();
  } else {
    ef.features = FeatureVector::missing(make_schema({}));
  }
  check_invariants(ef);
}

void to_json(json& j, const ProductRecord& r) {
  j = json{{"company", r.company},
           {"category", std::string(to_string(r.category))},
           {"name", r.name},
           {"features", r.features},
           {"reported_cf_kgco2e", r.reported_cf_kgco2e}};
  j["reported_uncertainty"] =
      r.reported_uncertainty ? json(*r.reported_uncertainty) : json(nullptr);
  j["stage_shares"] = r.stage_shares ? json(*r.stage_shares) : json(nullptr);
}

void from_json(const json& j, ProductRecord& r) {
  r.company = required<std::string>(j, "company");
  const auto cat = required<std::string>(j, "category");
  auto parsed = try_parse_category(cat);
  if (!parsed) throw_data_error("unknown product category '" + cat + "'");
  r.category = *parsed;
  r.name = required<std::string>(j, "name");
  r.features = required<FeatureVector>(j, "features");
  r.reported_cf_kgco2e = required<double>(j, "reported_cf_kgco2e");
  r.reported_uncertainty.reset();
  if (j.contains("reported_uncertainty") && !j.at("reported_uncertainty").is_null()) {
    r.reported_uncertainty = j.at("reported_uncertainty").get<double>();
  }
  r.stage_shares.reset();
  if (j.contains("stage_shares") && !j.at("stage_shares").is_null()) {
    r.stage_shares = j.at("stage_shares").get<std::map<std::string, double>>();
  }
  check_invariants(r);
}

void to_json(json& j, const Neighbor& n) {
  j = json{{"id", n.id}, {"distance", n.distance}, {"weight", n.weight}};
}

void from_json(const json& j, Neighbor& n) {
  n.id = required<std::string>(j, "id");
  n.distance = required<double>(j, "distance");
  n.weight = required<double>(j, "weight");
}

void to_json(json& j, const EntryContribution& c) {
  j = json{{"entry_index", c.entry_index},
           {"component_class", c.component_class},
           {"ef_id", c.ef_id},
           {"contribution_kgco2e", c.contribution_kgco2e},
           {"contribution_std", c.contribution_std}};
}

void from_json(const json& j, EntryContribution& c) {
  c.entry_index = required<std::size_t>(j, "entry_index");
  c.component_class = required<std::string>(j, "component_class");
  c.ef_id = required<std::string>(j, "ef_id");
  c.contribution_kgco2e = required<double>(j, "contribution_kgco2e");
  c.contribution_std = j.value("contribution_std", 0.0);
}

void to_json(json& j, const Violation& v) {
  j = json{{"entry_index", v.entry_index ? json(*v.entry_index) : json(nullptr)},
           {"message", v.message}};
}

json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw_data_error(std::string(what) + ": invalid JSON: " + e.what());
  }
}

}  // namespace carbonforge

namespace nlohmann {

using carbonforge::throw_data_error;

void adl_serializer<carbonforge::FeatureValue>::to_json(json& j,
                                                        const carbonforge::FeatureValue& v) {
  std::visit([&j](const auto& x) { j = x; }, v);
}

carbonforge::FeatureValue adl_serializer<carbonforge::FeatureValue>::from_json(const json& j) {
  return carbonforge::feature_value_from_json(j);
}

void adl_serializer<carbonforge::FeatureVector>::to_json(json& j,
                                                         const carbonforge::FeatureVector& v) {
  j = json{{"schema", v.schema()}, {"values", carbonforge::values_to_json(v)}};
}

carbonforge::FeatureVector adl_serializer<carbonforge::FeatureVector>::from_json(const json& j) {
  if (!j.is_object() || !j.contains("schema")) throw_data_error("feature vector needs a schema");
  auto schema = std::make_shared<const carbonforge::FeatureSchema>(
      j.at("schema").get<carbonforge::FeatureSchema>());
  return carbonforge::values_from_json(schema, j.value("values", json::object()));
}

void adl_serializer<carbonforge::DataAbstraction>::to_json(
    json& j, const carbonforge::DataAbstraction& da) {
  j = json{{"product_class", da.product_class()},
           {"component_classes", da.component_classes()},
           {"required_attributes", da.required_attributes()}};
}

carbonforge::DataAbstraction adl_serializer<carbonforge::DataAbstraction>::from_json(
    const json& j) {
  try {
    return carbonforge::DataAbstraction(
        j.at("product_class").get<std::string>(),
        j.at("component_classes").get<std::vector<std::string>>(),
        j.value("required_attributes", std::map<std::string, std::vector<std::string>>{}));
  } catch (const json::exception& e) {
    throw_data_error(std::string("data abstraction: ") + e.what());
  }
}

void adl_serializer<carbonforge::LifeCycleInventory>::to_json(
    json& j, const carbonforge::LifeCycleInventory& lci) {
  j = json{{"product", lci.product},
           {"da", lci.da},
           {"entries", lci.entries},
           {"provenance", lci.provenance}};
}

carbonforge::LifeCycleInventory adl_serializer<carbonforge::LifeCycleInventory>::from_json(
    const json& j) {
  if (!j.is_object() || !j.contains("da")) throw_data_error("inventory needs a 'da' object");
  carbonforge::LifeCycleInventory lci{j.value("product", std::string{}),
                                      j.at("da").get<carbonforge::DataAbstraction>(),
                                      {},
                                      {}};
  try {
    lci.entries = j.value("entries", std::vector<carbonforge::InventoryEntry>{});
    lci.provenance = j.value("provenance", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw_data_error(std::string("inventory: ") + e.what());
  }
  return lci;
}

void adl_serializer<carbonforge::EstimateDistribution>::to_json(
    json& j, const carbonforge::EstimateDistribution& e) {
  const auto [lo, hi] = e.ci95();
  j = json{{"mean", e.mean()},
           {"std", e.std()},
           {"ci95", json::array({lo, hi})},
           {"neighbors", e.neighbors()},
           {"method_tag", e.method_tag()}};
}

carbonforge::EstimateDistribution adl_serializer<carbonforge::EstimateDistribution>::from_json(
    const json& j) {
  try {
    return carbonforge::EstimateDistribution(
        j.at("mean").get<double>(), j.at("std").get<double>(),
        j.value("neighbors", std::vector<carbonforge::Neighbor>{}),
        j.value("method_tag", std::string{}));
  } catch (const json::exception& e) {
    throw_data_error(std::string("estimate: ") + e.what());
  }
}

void adl_serializer<carbonforge::CFBreakdown>::to_json(json& j,
                                                       const carbonforge::CFBreakdown& b) {
  j = json{{"total_kgco2e", b.total_kgco2e()},
           {"total_std_kgco2e", b.total_std()},
           {"per_entry", b.per_entry()},
           {"per_class", b.per_class()}};
}

carbonforge::CFBreakdown adl_serializer<carbonforge::CFBreakdown>::from_json(const json& j) {
  try {
    return carbonforge::CFBreakdown(
        j.at("per_entry").get<std::vector<carbonforge::EntryContribution>>());
  } catch (const json::exception& e) {
    throw_data_error(std::string("breakdown: ") + e.what());
  }
}

}  // namespace nlohmann
