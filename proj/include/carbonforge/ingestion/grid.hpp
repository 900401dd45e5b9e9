#pragma once

#include <array>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "carbonforge/core/feature_vector.hpp"
#include "carbonforge/ingestion/report.hpp"

namespace carbonforge::ingest {

inline constexpr std::array<const char*, 11> kGridSources = {
    "nuclear", "wind",    "hydro",      "solar",             "coal",   "gas",
    "oil",     "biomass", "geothermal", "battery_discharge", "unknown"};

/// Schema of the eleven source shares (all numeric).
SchemaPtr grid_source_schema();

struct GridRecord {
  std::string region;
  /// ISO-8601 day, YYYY-MM-DD.
  std::string date;
  double carbon_intensity_g_per_kwh = 0.0;
  FeatureVector source_shares = FeatureVector::missing(grid_source_schema());

  bool operator==(const GridRecord&) const = default;
};

/// Throws a data error when a share is outside [0,1], the intensity is not
/// positive, the date is not a calendar day, or the shares do not sum to one
/// (all present) or exceed one (some missing), both with tolerance 1e-3.
void check_invariants(const GridRecord& r);

/// Columns: region,date,carbon_intensity_g_per_kwh, then the eleven sources
/// in kGridSources order. Empty share cells are MISSING.
ParseResult<GridRecord> parse_grid_records(std::istream& in);
void write_grid_records(std::ostream& out, std::span<const GridRecord> records);

/// Mean of the daily intensities of each region. Throws on an empty input.
std::map<std::string, double> annual_mean_intensity(std::span<const GridRecord> records);
/// Same over an explicit grouping; an empty group is an error.
std::map<std::string, double> annual_mean_intensity(
    const std::map<std::string, std::vector<double>>& daily_by_region);

/// One record per region: mean intensity and per-source mean share over the
/// days where that share is present (MISSING if never present).
std::vector<GridRecord> annual_profiles(std::span<const GridRecord> records);

}  // namespace carbonforge::ingest
