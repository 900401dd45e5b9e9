#include "carbonforge/efgen/benchmark.hpp"

#include <cmath>

#include "carbonforge/core/error.hpp"
#include "carbonforge/util/csv.hpp"
#include "carbonforge/util/rng.hpp"

namespace carbonforge::efgen {

BenchmarkReport run_masked_benchmark(std::span<const MaterialEntry> db, std::size_t n_masked,
                                     std::size_t k, MaterialMode mode, std::uint64_t seed) {
  if (n_masked > db.size()) {
    throw_usage_error("n_masked exceeds the database size " + std::to_string(db.size()));
  }
  BenchmarkReport report;
  report.mode = std::string(to_string(mode));
  report.k = k;
  report.seed = seed;

  Rng rng(seed);
  const auto order = rng.permutation(db.size());
  for (std::size_t m = 0; m < n_masked; ++m) {
    const auto& entry = db[order[m]];
    const auto est = estimate_material_ef(db, entry, {k, mode, entry.ef.id});
    BenchmarkRow row;
    row.id = entry.ef.id;
    row.true_ef = entry.ef.kgco2e_per_unit;
    row.estimate = est.mean();
    row.std = est.std();
    row.ape = 100.0 * std::abs(est.mean() - row.true_ef) / row.true_ef;
    for (const auto& n : est.neighbors()) row.neighbor_ids.push_back(n.id);
    report.rows.push_back(std::move(row));
  }
  if (report.rows.empty()) return report;

  const double n = static_cast<double>(report.rows.size());
  double ape_sum = 0.0, ae_sum = 0.0;
  for (const auto& r : report.rows) {
    ape_sum += r.ape;
    ae_sum += std::abs(r.estimate - r.true_ef);
  }
  report.mape = ape_sum / n;
  report.mae = ae_sum / n;

  double var = 0.0;
  for (const auto& r : report.rows) var += (r.ape - report.mape) * (r.ape - report.mape);
  const double sd = std::sqrt(var / n);
  double kept = 0.0;
  ape_sum = ae_sum = 0.0;
  for (auto& r : report.rows) {
    r.outlier = std::abs(r.ape - report.mape) > 3.0 * sd;
    if (r.outlier) {
      ++report.outliers;
      continue;
    }
    ++kept;
    ape_sum += r.ape;
    ae_sum += std::abs(r.estimate - r.true_ef);
  }
  report.mape_trimmed = ape_sum / kept;
  report.mae_trimmed = ae_sum / kept;
  return report;
}

json to_json(const BenchmarkReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"id", r.id},
                    {"true_ef", r.true_ef},
                    {"estimate", r.estimate},
                    {"std", r.std},
                    {"ape", r.ape},
                    {"neighbor_ids", r.neighbor_ids},
                    {"outlier", r.outlier}});
  }
  return json{{"mode", report.mode},
              {"k", report.k},
              {"seed", report.seed},
              {"rows", rows},
              {"aggregate",
               {{"n", report.rows.size()},
                {"mape", report.mape},
                {"mae", report.mae},
                {"mape_trimmed", report.mape_trimmed},
                {"mae_trimmed", report.mae_trimmed},
                {"outliers", report.outliers}}}};
}

void write_csv(std::ostream& out, const BenchmarkReport& report) {
  out << "id,true_ef,estimate,std,ape,outlier,neighbor_ids\n";
  for (const auto& r : report.rows) {
    std::string ids;
    for (const auto& id : r.neighbor_ids) ids += (ids.empty() ? "" : ";") + id;
    out << csv::join({r.id, csv::format_number(r.true_ef), csv::format_number(r.estimate),
                      csv::format_number(r.std), csv::format_number(r.ape),
                      r.outlier ? "1" : "0", ids})
        << '\n';
  }
  out << csv::join({"#aggregate", "mape=" + csv::format_number(report.mape),
                    "mae=" + csv::format_number(report.mae),
                    "mape_trimmed=" + csv::format_number(report.mape_trimmed),
                    "mae_trimmed=" + csv::format_number(report.mae_trimmed),
                    "outliers=" + std::to_string(report.outliers), ""})
      << '\n';
}

}  // namespace carbonforge::efgen
