#include "carbonforge/eval/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "carbonforge/efgen/grid_ef.hpp"
#include "carbonforge/util/rng.hpp"

namespace carbonforge::eval {

namespace {

std::vector<double> normalized(std::vector<double> w, double total) {
  double s = 0.0;
  for (double x : w) s += x;
  for (double& x : w) x = x / s * total;
  return w;
}

std::string numbered(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%04zu", prefix, i);
  return buf;
}

}  // namespace

std::vector<ingest::GridRecord> synthetic_grid_world(std::size_t n_regions, std::uint64_t seed,
                                                     double noise) {
  Rng rng(seed);
  const auto schema = ingest::grid_source_schema();
  std::vector<ingest::GridRecord> out;
  out.reserve(n_regions);
  for (std::size_t r = 0; r < n_regions; ++r) {
    const double t = 0.05 + 0.9 * rng.beta(2.0, 2.0);
    const double a = std::clamp(0.15 + 0.7 * (t - 0.05) / 0.9 + 0.15 * rng.normal(), 0.0, 1.0);

    std::vector<double> low = {0.15 + 0.3 * (1 - a), 0.25, 0.25 + 0.3 * a, 0.12 + 0.1 * (1 - a)};
    for (double& x : low) x *= std::exp(0.05 * rng.normal());
    low = normalized(low, (1.0 - t) * 0.94);

    std::vector<double> minor = {0.1 + 0.3 * a, 0.2 + 0.2 * (1 - a), 0.1, 0.1 + 0.2 * (1 - a),
                                 0.15 + 0.3 * a};
    for (double& x : minor) x *= std::exp(0.05 * rng.normal());
    minor = normalized(minor, 0.06);

    // nuclear, wind, hydro, solar, coal, gas, oil, biomass, geothermal,
    // battery_discharge, unknown
    std::vector<MaybeFeature> shares = {low[0],         low[1],         low[2],
                                        low[3],         0.94 * t * a,   0.94 * t * (1 - a),
                                        minor[0],       minor[1],       minor[2],
                                        minor[3],       minor[4]};
    ingest::GridRecord rec;
    rec.region = numbered("R", r);
    rec.date = "2024-07-01";
    rec.source_shares = FeatureVector(schema, std::move(shares));
    rec.carbon_intensity_g_per_kwh =
        mix_intensity(rec.source_shares) * std::max(0.05, 1.0 + noise * rng.normal());
    out.push_back(std::move(rec));
  }
  return out;
}

double mix_intensity(const FeatureVector& shares) {
  double ci = 0.0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    if (shares.present(i)) ci += numeric_value(shares, i) * kSourceIntensity.at(i);
  }
  return ci;
}

std::vector<knn::IndexedRecord> synthetic_products(std::size_t n, std::uint64_t seed,
                                                   double missing_rate, double noise) {
  static const SchemaPtr schema = make_schema({{"node_nm", FeatureKind::numeric},
                                               {"memory_gb", FeatureKind::numeric},
                                               {"storage_gb", FeatureKind::numeric},
                                               {"screen_in", FeatureKind::numeric},
                                               {"vendor", FeatureKind::categorical},
                                               {"form", FeatureKind::categorical}});
  static const char* kVendors[] = {"intel", "amd", "apple"};
  static const char* kForms[] = {"slim", "standard", "rugged"};
  Rng rng(seed);
  std::vector<knn::IndexedRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double node = 3.0 + 11.0 * rng.uniform();
    const double mem = 4.0 + 60.0 * rng.uniform();
    const double storage = 128.0 + 1900.0 * rng.uniform();
    const double screen = 11.0 + 7.0 * rng.uniform();
    const std::size_t vendor = rng.index(3);
    const std::size_t form = rng.index(3);
    const double y = (80.0 + 4.0 * mem + 0.05 * storage + 9.0 * screen + 3.0 * (14.0 - node) +
                      25.0 * static_cast<double>(form)) *
                     (vendor == 2 ? 0.85 : 1.0) * std::max(0.05, 1.0 + noise * rng.normal());
    std::vector<MaybeFeature> v = {node, mem, storage, screen, std::string(kVendors[vendor]),
                                   std::string(kForms[form])};
    if (missing_rate > 0.0) {
      for (auto& slot : v) {
        if (rng.uniform() < missing_rate) slot.reset();
      }
      if (std::none_of(v.begin(), v.end(), [](const auto& s) { return s.has_value(); })) {
        v[0] = node;
      }
    }
    out.push_back({numbered("P", i), FeatureVector(schema, std::move(v)), y});
  }
  return out;
}

std::vector<knn::IndexedRecord> synthetic_gaussian_clusters(std::size_t clusters,
                                                            std::size_t cluster_size,
                                                            std::uint64_t seed) {
  static const SchemaPtr schema =
      make_schema({{"x0", FeatureKind::numeric}, {"x1", FeatureKind::numeric}});
  Rng rng(seed);
  std::vector<knn::IndexedRecord> out;
  for (std::size_t c = 0; c < clusters; ++c) {
    // Cluster centres sit on a widely spaced lattice so neighbourhoods never
    // mix clusters.
    const double x0 = 100.0 * static_cast<double>(c % 8);
    const double x1 = 100.0 * static_cast<double>(c / 8);
    const double mean = 100.0 + 400.0 * rng.uniform();
    const double sd = 5.0 + 30.0 * rng.uniform();
    for (std::size_t i = 0; i < cluster_size; ++i) {
      out.push_back({numbered("G", c * cluster_size + i),
                     FeatureVector(schema, {MaybeFeature(x0), MaybeFeature(x1)}),
                     mean + sd * rng.normal()});
    }
  }
  return out;
}

std::vector<knn::IndexedRecord> grid_records_to_dataset(
    const std::vector<ingest::GridRecord>& records) {
  return efgen::build_grid_index(records).records();
}

}  // namespace carbonforge::eval
