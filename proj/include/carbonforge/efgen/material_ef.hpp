#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "carbonforge/core/estimate.hpp"
#include "carbonforge/core/records.hpp"
#include "carbonforge/efgen/embedding.hpp"

namespace carbonforge::efgen {

enum class MaterialMode { text_only, text_plus_domain };

std::string_view to_string(MaterialMode m);
MaterialMode parse_material_mode(std::string_view text);

inline constexpr std::size_t kTextCoordDims = 16;
inline constexpr const char* kLogKnnTag = "knn-log-gaussian";

/// melting_point_K, phase_at_stp, elemental_category, density_kg_m3.
SchemaPtr material_domain_schema();

struct MaterialEntry {
  EmissionFactor ef;
  FeatureVector domain_features = FeatureVector::missing(material_domain_schema());
  /// Projected description embedding (kTextCoordDims values).
  std::optional<std::vector<double>> text_coords;
};

/// Text coordinates of a description: embedding followed by the fixed
/// projection to kTextCoordDims.
std::vector<double> text_coordinates(std::string_view description,
                                     const EmbeddingProvider& provider);

/// Domain features are taken from ef.features by name; text coordinates are
/// computed when the description is non-empty. Throws when neither exists.
MaterialEntry make_material_entry(const EmissionFactor& ef, const EmbeddingProvider& provider);

/// text_0..text_15 followed, in text_plus_domain mode, by the domain slots.
FeatureVector material_feature_vector(const MaterialEntry& entry, MaterialMode mode);
FeatureVector material_feature_vector(const EmissionFactor& ef, const EmbeddingProvider& provider,
                                      MaterialMode mode);

struct MaterialOptions {
  std::size_t k = 5;
  MaterialMode mode = MaterialMode::text_plus_domain;
  /// Entry id left out of the neighbour pool (leave-one-out); empty = none.
  std::string exclude_id;
};

/// kNN weighted Gaussian over log EF. mean = exp(weighted mean of log EF);
/// std = mean · (weighted sd of log EF), the first-order log-normal spread.
EstimateDistribution estimate_material_ef(std::span<const MaterialEntry> db,
                                          const MaterialEntry& query,
                                          const MaterialOptions& options = {});

}  // namespace carbonforge::efgen
