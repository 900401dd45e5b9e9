#include "carbonforge/ingestion/grid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "carbonforge/core/error.hpp"
#include "carbonforge/util/csv.hpp"
#include "text_util.hpp"

namespace carbonforge::ingest {

namespace {

constexpr double kShareTolerance = 1e-3;

bool valid_day(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  const int y = std::stoi(s.substr(0, 4));
  const unsigned m = static_cast<unsigned>(std::stoi(s.substr(5, 2)));
  const unsigned d = static_cast<unsigned>(std::stoi(s.substr(8, 2)));
  return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                     std::chrono::day{d}}
      .ok();
}

// Summation after sorting makes the result independent of input order.
double sorted_mean(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

}  // namespace

SchemaPtr grid_source_schema() {
  static const SchemaPtr schema = [] {
    std::vector<FeatureSpec> specs;
    for (const char* s : kGridSources) specs.push_back({s, FeatureKind::numeric});
    return make_schema(std::move(specs));
  }();
  return schema;
}

void check_invariants(const GridRecord& r) {
  if (r.region.empty()) throw_data_error("region is empty");
  if (!valid_day(r.date)) throw_data_error("date '" + r.date + "' is not a YYYY-MM-DD day");
  if (!std::isfinite(r.carbon_intensity_g_per_kwh) || r.carbon_intensity_g_per_kwh <= 0.0) {
    throw_data_error("carbon_intensity_g_per_kwh must be > 0");
  }
  if (!(r.source_shares.schema() == *grid_source_schema())) {
    throw_data_error("source shares do not use the grid source schema");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < r.source_shares.size(); ++i) {
    if (!r.source_shares.present(i)) continue;
    const double v = numeric_value(r.source_shares, i);
    if (v < 0.0 || v > 1.0) {
      throw_data_error(std::string("share '") + kGridSources[i] + "' outside [0,1]");
    }
    sum += v;
  }
  const bool complete = r.source_shares.present_count() == r.source_shares.size();
  if (sum > 1.0 + kShareTolerance || (complete && std::abs(sum - 1.0) > kShareTolerance)) {
    throw_data_error("source shares sum to " + csv::format_number(sum));
  }
}

ParseResult<GridRecord> parse_grid_records(std::istream& in) {
  const auto rows = csv::read(in);
  std::vector<std::string> expected = {"region", "date", "carbon_intensity_g_per_kwh"};
  expected.insert(expected.end(), kGridSources.begin(), kGridSources.end());
  std::vector<std::string> header;
  if (!rows.empty()) {
    for (const auto& h : rows.front().cells) header.emplace_back(detail::trim(h));
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i >= header.size() || header[i] != expected[i]) {
      throw_data_error("grid file is missing column '" + expected[i] + "'");
    }
  }
  if (header.size() != expected.size()) {
    throw_data_error("grid file has unexpected column '" + header[expected.size()] + "'");
  }

  const auto schema = grid_source_schema();
  ParseResult<GridRecord> result;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& cells = rows[r].cells;
    try {
      if (cells.size() != expected.size()) {
        throw_data_error("expected " + std::to_string(expected.size()) + " cells, found " +
                         std::to_string(cells.size()));
      }
      GridRecord rec;
      rec.region = std::string(detail::trim(cells[0]));
      rec.date = std::string(detail::trim(cells[1]));
      auto ci = detail::parse_double(cells[2]);
      if (!ci) throw_data_error("carbon_intensity_g_per_kwh is not a number");
      rec.carbon_intensity_g_per_kwh = *ci;
      std::vector<MaybeFeature> shares(schema->size());
      for (std::size_t s = 0; s < schema->size(); ++s) {
        const auto cell = detail::trim(cells[3 + s]);
        if (cell.empty()) continue;
        auto v = detail::parse_double(cell);
        if (!v) throw_data_error(std::string("share '") + kGridSources[s] + "' is not a number");
        shares[s] = *v;
      }
      rec.source_shares = FeatureVector(schema, std::move(shares));
      check_invariants(rec);
      result.records.push_back(std::move(rec));
    } catch (const Error& e) {
      result.rejected.push_back({rows[r].line, e.what()});
    }
  }
  return result;
}

void write_grid_records(std::ostream& out, std::span<const GridRecord> records) {
  std::vector<std::string> header = {"region", "date", "carbon_intensity_g_per_kwh"};
  header.insert(header.end(), kGridSources.begin(), kGridSources.end());
  out << csv::join(header) << '\n';
  for (const auto& r : records) {
    std::vector<std::string> cells = {r.region, r.date,
                                      csv::format_number(r.carbon_intensity_g_per_kwh)};
    for (std::size_t s = 0; s < r.source_shares.size(); ++s) {
      cells.push_back(r.source_shares.present(s)
                          ? csv::format_number(numeric_value(r.source_shares, s))
                          : std::string{});
    }
    out << csv::join(cells) << '\n';
  }
}

std::map<std::string, double> annual_mean_intensity(std::span<const GridRecord> records) {
  if (records.empty()) throw_data_error("no grid records to average");
  std::map<std::string, std::vector<double>> grouped;
  for (const auto& r : records) grouped[r.region].push_back(r.carbon_intensity_g_per_kwh);
  return annual_mean_intensity(grouped);
}

std::map<std::string, double> annual_mean_intensity(
    const std::map<std::string, std::vector<double>>& daily_by_region) {
  std::map<std::string, double> out;
  for (const auto& [region, days] : daily_by_region) {
    if (days.empty()) throw_data_error("region '" + region + "' has no daily values");
    out[region] = sorted_mean(days);
  }
  return out;
}

std::vector<GridRecord> annual_profiles(std::span<const GridRecord> records) {
  const auto schema = grid_source_schema();
  struct Acc {
    std::string first_date;
    std::vector<double> ci;
    std::vector<std::vector<double>> shares;
  };
  std::map<std::string, Acc> acc;
  for (const auto& r : records) {
    auto& a = acc[r.region];
    if (a.shares.empty()) a.shares.resize(schema->size());
    if (a.first_date.empty() || r.date < a.first_date) a.first_date = r.date;
    a.ci.push_back(r.carbon_intensity_g_per_kwh);
    for (std::size_t s = 0; s < schema->size(); ++s) {
      if (r.source_shares.present(s)) a.shares[s].push_back(numeric_value(r.source_shares, s));
    }
  }
  std::vector<GridRecord> out;
  for (auto& [region, a] : acc) {
    GridRecord rec;
    rec.region = region;
    rec.date = a.first_date;
    rec.carbon_intensity_g_per_kwh = sorted_mean(a.ci);
    std::vector<MaybeFeature> shares(schema->size());
    for (std::size_t s = 0; s < schema->size(); ++s) {
      if (!a.shares[s].empty()) shares[s] = sorted_mean(a.shares[s]);
    }
    rec.source_shares = FeatureVector(schema, std::move(shares));
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace carbonforge::ingest
