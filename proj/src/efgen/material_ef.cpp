#include "carbonforge/efgen/material_ef.hpp"

#include <cmath>

#include "carbonforge/core/error.hpp"
#include "carbonforge/knn/estimator.hpp"
#include "carbonforge/knn/index.hpp"

namespace carbonforge::efgen {

namespace {

SchemaPtr material_schema(MaterialMode mode) {
  static const SchemaPtr text_only = [] {
    std::vector<FeatureSpec> specs;
    for (std::size_t i = 0; i < kTextCoordDims; ++i) {
      specs.push_back({"text_" + std::to_string(i), FeatureKind::numeric});
    }
    return make_schema(std::move(specs));
  }();
  static const SchemaPtr with_domain = [] {
    auto specs = text_only->specs();
    for (const auto& s : material_domain_schema()->specs()) specs.push_back(s);
    return make_schema(std::move(specs));
  }();
  return mode == MaterialMode::text_only ? text_only : with_domain;
}

}  // namespace

std::string_view to_string(MaterialMode m) {
  return m == MaterialMode::text_only ? "text_only" : "text_plus_domain";
}

MaterialMode parse_material_mode(std::string_view text) {
  if (text == "text_only") return MaterialMode::text_only;
  if (text == "text_plus_domain") return MaterialMode::text_plus_domain;
  throw_usage_error("unknown material mode '" + std::string(text) + "'");
}

SchemaPtr material_domain_schema() {
  static const SchemaPtr schema = make_schema({{"melting_point_K", FeatureKind::numeric},
                                               {"phase_at_stp", FeatureKind::categorical},
                                               {"elemental_category", FeatureKind::categorical},
                                               {"density_kg_m3", FeatureKind::numeric}});
  return schema;
}

std::vector<double> text_coordinates(std::string_view description,
                                     const EmbeddingProvider& provider) {
  // One projection per input dimension; cached for the common default.
  static const RandomProjection default_projection(256, kTextCoordDims);
  const auto v = provider.embed(description);
  if (v.size() == default_projection.in_dim()) return default_projection.apply(v);
  return RandomProjection(v.size(), kTextCoordDims).apply(v);
}

MaterialEntry make_material_entry(const EmissionFactor& ef, const EmbeddingProvider& provider) {
  const auto schema = material_domain_schema();
  std::vector<MaybeFeature> domain(schema->size());
  for (std::size_t i = 0; i < schema->size(); ++i) {
    const auto idx = ef.features.schema().index_of((*schema)[i].name);
    if (!idx || !ef.features.present(*idx)) continue;
    const auto& value = *ef.features[*idx];
    const bool numeric = std::holds_alternative<double>(value);
    if (numeric != ((*schema)[i].kind == FeatureKind::numeric)) {
      throw_data_error("emission factor '" + ef.id + "' has the wrong kind for '" +
                       (*schema)[i].name + "'");
    }
    domain[i] = value;
  }
  MaterialEntry entry{ef, FeatureVector(schema, std::move(domain)), std::nullopt};
  if (!ef.description.empty()) entry.text_coords = text_coordinates(ef.description, provider);
  if (!entry.text_coords && entry.domain_features.present_count() == 0) {
    throw_data_error("emission factor '" + ef.id + "' has neither description nor features");
  }
  return entry;
}

FeatureVector material_feature_vector(const MaterialEntry& entry, MaterialMode mode) {
  const auto schema = material_schema(mode);
  std::vector<MaybeFeature> values;
  values.reserve(schema->size());
  for (std::size_t i = 0; i < kTextCoordDims; ++i) {
    if (entry.text_coords) {
      values.emplace_back((*entry.text_coords).at(i));
    } else {
      values.emplace_back();
    }
  }
  if (mode == MaterialMode::text_plus_domain) {
    for (const auto& v : entry.domain_features.values()) values.push_back(v);
  }
  return FeatureVector(schema, std::move(values));
}

FeatureVector material_feature_vector(const EmissionFactor& ef, const EmbeddingProvider& provider,
                                      MaterialMode mode) {
  if (ef.description.empty()) throw_data_error("emission factor '" + ef.id + "' has no description");
  return material_feature_vector(make_material_entry(ef, provider), mode);
}

EstimateDistribution estimate_material_ef(std::span<const MaterialEntry> db,
                                          const MaterialEntry& query,
                                          const MaterialOptions& options) {
  std::vector<knn::IndexedRecord> rows;
  rows.reserve(db.size());
  for (const auto& m : db) {
    if (!options.exclude_id.empty() && m.ef.id == options.exclude_id) continue;
    rows.push_back({m.ef.id, material_feature_vector(m, options.mode),
                    std::log(m.ef.kgco2e_per_unit)});
  }
  if (rows.empty()) throw_data_error("material database is empty");
  const auto index = knn::build_index(std::move(rows), "material");
  const auto log_est =
      knn::estimate(index, material_feature_vector(query, options.mode), options.k);
  const double mean = std::exp(log_est.mean());
  return EstimateDistribution(mean, mean * log_est.std(), log_est.neighbors(), kLogKnnTag);
}

}  // namespace carbonforge::efgen
