#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "carbonforge/core/estimate.hpp"
#include "carbonforge/core/inventory.hpp"
#include "carbonforge/core/json.hpp"
#include "carbonforge/core/records.hpp"
#include "carbonforge/efgen/material_ef.hpp"
#include "carbonforge/lcia/matcher.hpp"

namespace carbonforge::lcia {

struct AssessOptions {
  double threshold = kDefaultThreshold;
  /// Generate factors for entries without a match instead of failing.
  bool fallback = false;
  std::size_t k = 5;
  efgen::MaterialMode mode = efgen::MaterialMode::text_plus_domain;
  /// Defaults to a HashingEmbedder when null.
  const efgen::EmbeddingProvider* provider = nullptr;
};

struct Assessment {
  CFBreakdown breakdown;
  std::vector<MatchResult> matches;
  /// Generated factor estimates, by entry index.
  std::map<std::size_t, EstimateDistribution> generated;
};

/// contribution = quantity × factor. Entries below the match threshold get a
/// generated factor from the unit-compatible database entries when fallback
/// is on; otherwise all unmatched entries are reported in one error. The
/// inventory must pass validate_inventory.
Assessment assess_detailed(const LifeCycleInventory& lci, std::span<const EmissionFactor> db,
                           const AssessOptions& options = {});
CFBreakdown assess(const LifeCycleInventory& lci, std::span<const EmissionFactor> db,
                   const AssessOptions& options = {});

/// Fixed-width per-entry table with class subtotals and the total.
std::string render_table(const LifeCycleInventory& lci, const CFBreakdown& b);

}  // namespace carbonforge::lcia
