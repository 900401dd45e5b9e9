#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "carbonforge/core/json.hpp"
#include "carbonforge/efgen/material_ef.hpp"

namespace carbonforge::efgen {

struct BenchmarkRow {
  std::string id;
  double true_ef = 0.0;
  double estimate = 0.0;
  double std = 0.0;
  double ape = 0.0;
  std::vector<std::string> neighbor_ids;
  /// Excluded from the trimmed aggregates (APE beyond mean ± 3 sd).
  bool outlier = false;
};

struct BenchmarkReport {
  std::string mode;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<BenchmarkRow> rows;
  double mape = 0.0;
  double mae = 0.0;
  double mape_trimmed = 0.0;
  double mae_trimmed = 0.0;
  std::size_t outliers = 0;
};

/// Masks n_masked entries chosen by a seeded permutation, estimates each with
/// itself left out of the pool (by id, so true duplicates stay available),
/// and aggregates. n_masked = |db| is leave-one-out over the whole database.
BenchmarkReport run_masked_benchmark(std::span<const MaterialEntry> db, std::size_t n_masked,
                                     std::size_t k, MaterialMode mode, std::uint64_t seed);

json to_json(const BenchmarkReport& report);
void write_csv(std::ostream& out, const BenchmarkReport& report);

}  // namespace carbonforge::efgen
