#pragma once

#include <span>

#include "carbonforge/core/estimate.hpp"
#include "carbonforge/ingestion/grid.hpp"
#include "carbonforge/knn/estimator.hpp"
#include "carbonforge/knn/index.hpp"

namespace carbonforge::efgen {

/// Grid runs rank records sharing fewer than three sources with the query
/// last; see EstimateOptions::min_overlap.
inline constexpr knn::EstimateOptions kGridDefaults{5, 3};

/// The eleven-source share vector, MISSING preserved.
FeatureVector grid_feature_vector(const ingest::GridRecord& rec);

/// Index keyed by region (region@date when a region repeats), target in
/// gCO2e/kWh.
knn::TrainedIndex build_grid_index(std::span<const ingest::GridRecord> records);

/// Thin delegation to knn::estimate over the grid schema.
EstimateDistribution estimate_grid_ci(const knn::TrainedIndex& index, const FeatureVector& mix,
                                      const knn::EstimateOptions& options = kGridDefaults);

}  // namespace carbonforge::efgen
