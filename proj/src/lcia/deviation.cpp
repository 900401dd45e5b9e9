#include "carbonforge/lcia/deviation.hpp"

#include <algorithm>
#include <cmath>

#include "carbonforge/core/error.hpp"
#include "carbonforge/util/csv.hpp"

namespace carbonforge::lcia {

DeviationReport compare_to_reported(const CFBreakdown& breakdown, const ProductRecord& reported) {
  if (!(reported.reported_cf_kgco2e > 0.0)) throw_data_error("reported CF must be positive");
  DeviationReport r;
  r.product = record_id(reported);
  r.estimated_kgco2e = breakdown.total_kgco2e();
  r.reported_kgco2e = reported.reported_cf_kgco2e;
  r.signed_error = r.estimated_kgco2e - r.reported_kgco2e;
  r.ape = 100.0 * std::abs(r.signed_error) / r.reported_kgco2e;
  r.ranked_classes.assign(breakdown.per_class().begin(), breakdown.per_class().end());
  std::stable_sort(r.ranked_classes.begin(), r.ranked_classes.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return r;
}

std::vector<DeviationReport> rank_fleet(std::vector<DeviationReport> reports) {
  std::sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
    if (a.ape != b.ape) return a.ape > b.ape;
    return a.product < b.product;
  });
  return reports;
}

json to_json(const DeviationReport& r) {
  json classes = json::array();
  for (const auto& [cls, v] : r.ranked_classes) {
    classes.push_back({{"component_class", cls}, {"kgco2e", v}});
  }
  return json{{"product", r.product},
              {"estimated_kgco2e", r.estimated_kgco2e},
              {"reported_kgco2e", r.reported_kgco2e},
              {"signed_error", r.signed_error},
              {"ape", r.ape},
              {"ranked_classes", classes}};
}

void write_deviation_csv(std::ostream& out, std::span<const DeviationReport> reports) {
  out << "product,estimated_kgco2e,reported_kgco2e,signed_error,ape,top_class\n";
  for (const auto& r : reports) {
    out << csv::join({r.product, csv::format_number(r.estimated_kgco2e),
                      csv::format_number(r.reported_kgco2e), csv::format_number(r.signed_error),
                      csv::format_number(r.ape),
                      r.ranked_classes.empty() ? "" : r.ranked_classes.front().first})
        << '\n';
  }
}

}  // namespace carbonforge::lcia
