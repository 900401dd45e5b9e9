#include "carbonforge/knn/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "carbonforge/core/error.hpp"

namespace carbonforge::knn {

namespace {

struct Candidate {
  int tier;
  double dist;
  const IndexedRecord* rec;
};

bool ranks_before(const Candidate& a, const Candidate& b) {
  return std::tie(a.tier, a.dist, a.rec->id) < std::tie(b.tier, b.dist, b.rec->id);
}

}  // namespace

double distance(const FeatureVector& a, const FeatureVector& b, const Normalization& norm) {
  const std::size_t d = a.size();
  std::size_t shared = 0;
  double ss = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (!a.present(i) || !b.present(i)) continue;
    ++shared;
    const auto& va = *a[i];
    const auto& vb = *b[i];
    if (const double* xa = std::get_if<double>(&va)) {
      const double diff = (*xa - std::get<double>(vb)) / norm.std[i];
      ss += diff * diff;
    } else if (std::get<std::string>(va) != std::get<std::string>(vb)) {
      ss += 1.0;
    }
  }
  if (shared == 0) return kNoOverlap;
  return std::sqrt(ss) * std::sqrt(static_cast<double>(d) / static_cast<double>(shared));
}

std::size_t overlap(const FeatureVector& a, const FeatureVector& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += (a.present(i) && b.present(i)) ? 1 : 0;
  return n;
}

double neighbor_weight(const FeatureVector& v) {
  return std::max(completeness(v), 1.0 / static_cast<double>(v.size()));
}

EstimateDistribution estimate(const TrainedIndex& index, const FeatureVector& query,
                              const EstimateOptions& options) {
  if (options.k == 0) throw_usage_error("k must be positive");
  if (!(query.schema() == index.schema())) {
    throw_data_error("query schema does not match the index schema");
  }
  const std::size_t floor_overlap = std::min(options.min_overlap, query.present_count());

  std::vector<Candidate> cands;
  cands.reserve(index.size());
  for (const auto& r : index.records()) {
    const double dist = distance(query, r.features, index.normalization());
    if (dist == kNoOverlap) continue;
    const int tier = overlap(query, r.features) < floor_overlap ? 1 : 0;
    cands.push_back({tier, dist, &r});
  }
  if (cands.empty()) throw_data_error("query disjoint from index schema");

  const std::size_t k = std::min(options.k, cands.size());
  std::nth_element(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(k - 1), cands.end(),
                   ranks_before);
  std::sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(k), ranks_before);

  std::vector<Neighbor> neighbors;
  double wsum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& c = cands[i];
    const double w = neighbor_weight(c.rec->features);
    neighbors.push_back({c.rec->id, c.dist, w});
    wsum += w;
  }
  // Normalized weights keep a single neighbour's target exact.
  double mean = 0.0;
  for (std::size_t i = 0; i < k; ++i) mean += neighbors[i].weight / wsum * cands[i].rec->target;
  double var = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dev = cands[i].rec->target - mean;
    var += neighbors[i].weight / wsum * dev * dev;
  }
  return EstimateDistribution(mean, std::sqrt(var), std::move(neighbors), kKnnTag);
}

EstimateDistribution estimate(const TrainedIndex& index, const FeatureVector& query,
                              std::size_t k) {
  return estimate(index, query, EstimateOptions{k, 1});
}

}  // namespace carbonforge::knn
