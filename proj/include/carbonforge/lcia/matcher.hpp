#pragma once

#include <span>
#include <string>
#include <vector>

#include "carbonforge/core/inventory.hpp"
#include "carbonforge/core/records.hpp"
#include "carbonforge/efgen/embedding.hpp"

namespace carbonforge::lcia {

inline constexpr double kDefaultThreshold = 0.6;

struct MatchResult {
  /// True when no unit-compatible factor clears the threshold; the entry's
  /// factor must then be generated.
  bool generate = false;
  /// Best unit-compatible factor even when below threshold; empty if none.
  std::string ef_id;
  double similarity = 0.0;

  bool operator==(const MatchResult&) const = default;
};

/// Database with description embeddings computed once, iterated in id order.
class EfMatcher {
 public:
  EfMatcher(std::span<const EmissionFactor> db, const efgen::EmbeddingProvider& provider);

  /// Highest cosine similarity among unit-compatible factors; ties go to the
  /// smaller id. Throws when there is no unit-compatible factor and
  /// fallback is off.
  MatchResult match(const InventoryEntry& entry, double threshold, bool fallback) const;

  const EmissionFactor& factor(const std::string& id) const;
  /// Unit-compatible factors in id order.
  std::vector<const EmissionFactor*> with_unit(Unit unit) const;

 private:
  const efgen::EmbeddingProvider* provider_;
  std::vector<EmissionFactor> factors_;
  std::vector<std::vector<double>> embeddings_;
};

MatchResult match_entry(const InventoryEntry& entry, std::span<const EmissionFactor> db,
                        const efgen::EmbeddingProvider& provider,
                        double threshold = kDefaultThreshold, bool fallback = true);

}  // namespace carbonforge::lcia
