#include "carbonforge/efgen/grid_ef.hpp"

#include <map>

#include "carbonforge/core/error.hpp"

namespace carbonforge::efgen {

FeatureVector grid_feature_vector(const ingest::GridRecord& rec) { return rec.source_shares; }

knn::TrainedIndex build_grid_index(std::span<const ingest::GridRecord> records) {
  std::map<std::string, int> per_region;
  for (const auto& r : records) ++per_region[r.region];
  std::vector<knn::IndexedRecord> rows;
  rows.reserve(records.size());
  for (const auto& r : records) {
    std::string id = per_region[r.region] > 1 ? r.region + "@" + r.date : r.region;
    rows.push_back({std::move(id), grid_feature_vector(r), r.carbon_intensity_g_per_kwh});
  }
  return knn::build_index(std::move(rows), "grid");
}

EstimateDistribution estimate_grid_ci(const knn::TrainedIndex& index, const FeatureVector& mix,
                                      const knn::EstimateOptions& options) {
  if (!(mix.schema() == *ingest::grid_source_schema())) {
    throw_data_error("query is not a grid source-share vector");
  }
  return knn::estimate(index, mix, options);
}

}  // namespace carbonforge::efgen
