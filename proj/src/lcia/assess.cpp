#include "carbonforge/lcia/assess.hpp"

#include <cstdio>
#include <sstream>

#include "carbonforge/core/error.hpp"

namespace carbonforge::lcia {

namespace {

EstimateDistribution generate_factor(const InventoryEntry& entry, const EfMatcher& matcher,
                                     const efgen::EmbeddingProvider& provider,
                                     const AssessOptions& options) {
  const auto pool_refs = matcher.with_unit(entry.unit);
  if (pool_refs.empty()) {
    throw_data_error("no " + std::string(to_string(entry.unit)) +
                     " emission factors to generate from");
  }
  std::vector<efgen::MaterialEntry> pool;
  pool.reserve(pool_refs.size());
  for (const auto* ef : pool_refs) pool.push_back(efgen::make_material_entry(*ef, provider));

  // The query carries the entry's description and any domain attributes.
  EmissionFactor probe;
  probe.id = "query";
  probe.description = entry.description;
  probe.unit = entry.unit;
  probe.kgco2e_per_unit = 1.0;
  std::map<std::string, FeatureValue> domain;
  const auto schema = efgen::material_domain_schema();
  for (const auto& spec : schema->specs()) {
    auto it = entry.attributes.find(spec.name);
    if (it == entry.attributes.end()) continue;
    if (std::holds_alternative<double>(it->second) == (spec.kind == FeatureKind::numeric)) {
      domain.emplace(spec.name, it->second);
    }
  }
  probe.features = FeatureVector::from_map(schema, domain);
  const auto query = efgen::make_material_entry(probe, provider);
  return efgen::estimate_material_ef(pool, query,
                                     {std::min(options.k, pool.size()), options.mode, {}});
}

}  // namespace

Assessment assess_detailed(const LifeCycleInventory& lci, std::span<const EmissionFactor> db,
                           const AssessOptions& options) {
  const auto violations = validate_inventory(lci);
  if (!violations.empty()) {
    std::string msg = "inventory fails validation:";
    for (const auto& v : violations) msg += " " + v.message + ";";
    throw_data_error(msg);
  }
  Assessment out;
  if (lci.entries.empty()) return out;

  const efgen::HashingEmbedder fallback_provider;
  const auto& provider = options.provider ? *options.provider : fallback_provider;
  const EfMatcher matcher(db, provider);

  std::vector<std::string> unmatched;
  std::vector<EntryContribution> rows;
  for (std::size_t i = 0; i < lci.entries.size(); ++i) {
    const auto& e = lci.entries[i];
    MatchResult m;
    try {
      m = matcher.match(e, options.threshold, options.fallback);
    } catch (const Error& err) {
      unmatched.push_back("#" + std::to_string(i) + " " + err.what());
      continue;
    }
    out.matches.push_back(m);
    if (!m.generate) {
      const auto& ef = matcher.factor(m.ef_id);
      rows.push_back({i, e.component_class, ef.id, e.quantity * ef.kgco2e_per_unit, 0.0});
      continue;
    }
    if (!options.fallback) {
      unmatched.push_back("#" + std::to_string(i) + " '" + e.description + "' (best similarity " +
                          std::to_string(m.similarity) + ")");
      continue;
    }
    auto est = generate_factor(e, matcher, provider, options);
    rows.push_back({i, e.component_class, kGeneratedEf, e.quantity * est.mean(),
                    e.quantity * est.std()});
    out.generated.emplace(i, std::move(est));
  }
  if (!unmatched.empty()) {
    std::string msg = "unmatched inventory entries:";
    for (const auto& u : unmatched) msg += " " + u + ";";
    throw_data_error(msg);
  }
  out.breakdown = CFBreakdown(std::move(rows));
  return out;
}

CFBreakdown assess(const LifeCycleInventory& lci, std::span<const EmissionFactor> db,
                   const AssessOptions& options) {
  return assess_detailed(lci, db, options).breakdown;
}

std::string render_table(const LifeCycleInventory& lci, const CFBreakdown& b) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-5s %-12s %-32s %12s %-6s %-20s %14s\n", "#", "class",
                "description", "quantity", "unit", "factor", "kgCO2e");
  out << line;
  for (const auto& c : b.per_entry()) {
    const auto& e = lci.entries.at(c.entry_index);
    std::snprintf(line, sizeof line, "%-5zu %-12.12s %-32.32s %12.4g %-6s %-20.20s %14.6g\n",
                  c.entry_index, e.component_class.c_str(), e.description.c_str(), e.quantity,
                  std::string(to_string(e.unit)).c_str(), c.ef_id.c_str(), c.contribution_kgco2e);
    out << line;
  }
  for (const auto& [cls, total] : b.per_class()) {
    std::snprintf(line, sizeof line, "class %-24s %14.6g\n", cls.c_str(), total);
    out << line;
  }
  std::snprintf(line, sizeof line, "total %-24s %14.6g (sd %.4g)\n", "", b.total_kgco2e(),
                b.total_std());
  out << line;
  return out.str();
}

}  // namespace carbonforge::lcia
