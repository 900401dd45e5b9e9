#pragma once

#include <cstddef>
#include <limits>

#include "carbonforge/core/estimate.hpp"
#include "carbonforge/knn/index.hpp"

namespace carbonforge::knn {

inline constexpr double kNoOverlap = std::numeric_limits<double>::infinity();
inline constexpr const char* kKnnTag = "knn-weighted-gaussian";

/// Euclidean distance over mutually present slots, numeric slots z-scored
/// and categorical slots 0/1, scaled by sqrt(d/|S|). kNoOverlap when no slot
/// is present in both.
double distance(const FeatureVector& a, const FeatureVector& b, const Normalization& norm);

/// Number of slots present in both vectors.
std::size_t overlap(const FeatureVector& a, const FeatureVector& b);

struct EstimateOptions {
  std::size_t k = 5;
  /// Records sharing fewer than min(min_overlap, present query slots) slots
  /// with the query rank after every other record. 1 ranks purely by
  /// distance.
  std::size_t min_overlap = 1;
};

/// Neighbour weight: completeness with floor 1/d.
double neighbor_weight(const FeatureVector& v);

/// Weighted Gaussian over the k nearest records (ties by id). Records with
/// no overlap are never neighbours. Throws "query disjoint from index
/// schema" when no record overlaps the query.
EstimateDistribution estimate(const TrainedIndex& index, const FeatureVector& query,
                              const EstimateOptions& options = {});
EstimateDistribution estimate(const TrainedIndex& index, const FeatureVector& query,
                              std::size_t k);

}  // namespace carbonforge::knn
