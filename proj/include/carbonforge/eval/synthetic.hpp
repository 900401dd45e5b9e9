#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "carbonforge/ingestion/grid.hpp"
#include "carbonforge/knn/index.hpp"

namespace carbonforge::eval {

/// Fixed per-source intensities (gCO2e/kWh) of the synthetic grid world, in
/// kGridSources order.
inline constexpr std::array<double, 11> kSourceIntensity = {12,  11,  24, 45, 820, 490,
                                                            650, 230, 38, 300, 450};

/// Regions whose mixes vary along a fossil fraction and a coal/gas split:
/// the low-carbon sources shift with the coal share, and a small minor-source
/// tail follows the same split. CI = Σ share·intensity, times (1 + noise·N(0,1)).
std::vector<ingest::GridRecord> synthetic_grid_world(std::size_t n_regions, std::uint64_t seed,
                                                     double noise = 0.05);

/// Noise-free intensity of a complete mix.
double mix_intensity(const FeatureVector& shares);

/// Product-like records: four numeric features and two categorical ones,
/// target a smooth positive function of them plus multiplicative noise.
/// `missing_rate` of the feature cells are MISSING (never a whole record).
std::vector<knn::IndexedRecord> synthetic_products(std::size_t n, std::uint64_t seed,
                                                   double missing_rate = 0.0,
                                                   double noise = 0.05);

/// Records in clusters of `cluster_size` sharing identical features, with
/// targets drawn from N(mean_c, sd_c²) per cluster.
std::vector<knn::IndexedRecord> synthetic_gaussian_clusters(std::size_t clusters,
                                                            std::size_t cluster_size,
                                                            std::uint64_t seed);

std::vector<knn::IndexedRecord> grid_records_to_dataset(
    const std::vector<ingest::GridRecord>& records);

}  // namespace carbonforge::eval
