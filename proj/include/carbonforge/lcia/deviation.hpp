#pragma once

#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "carbonforge/core/estimate.hpp"
#include "carbonforge/core/json.hpp"
#include "carbonforge/core/records.hpp"

namespace carbonforge::lcia {

struct DeviationReport {
  std::string product;
  double estimated_kgco2e = 0.0;
  double reported_kgco2e = 0.0;
  /// estimated − reported.
  double signed_error = 0.0;
  /// |signed_error| / reported · 100.
  double ape = 0.0;
  /// Per-class contributions, largest first (ties by class name).
  std::vector<std::pair<std::string, double>> ranked_classes;
};

DeviationReport compare_to_reported(const CFBreakdown& breakdown, const ProductRecord& reported);

/// Descending APE, ties by product name.
std::vector<DeviationReport> rank_fleet(std::vector<DeviationReport> reports);

json to_json(const DeviationReport& r);
void write_deviation_csv(std::ostream& out, std::span<const DeviationReport> reports);

}  // namespace carbonforge::lcia
