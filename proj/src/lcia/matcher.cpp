#include "carbonforge/lcia/matcher.hpp"

#include <algorithm>

#include "carbonforge/core/error.hpp"

namespace carbonforge::lcia {

EfMatcher::EfMatcher(std::span<const EmissionFactor> db, const efgen::EmbeddingProvider& provider)
    : provider_(&provider), factors_(db.begin(), db.end()) {
  std::sort(factors_.begin(), factors_.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < factors_.size(); ++i) {
    if (factors_[i].id == factors_[i - 1].id) {
      throw_data_error("duplicate emission factor id '" + factors_[i].id + "'");
    }
  }
  embeddings_.reserve(factors_.size());
  for (const auto& ef : factors_) embeddings_.push_back(provider.embed(ef.description));
}

MatchResult EfMatcher::match(const InventoryEntry& entry, double threshold, bool fallback) const {
  if (threshold < 0.0 || threshold > 1.0) throw_usage_error("threshold must be in [0,1]");
  if (factors_.empty()) throw_data_error("emission factor database is empty");
  const auto query = provider_->embed(entry.description);
  MatchResult best;
  bool found = false;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].unit != entry.unit) continue;
    const double sim = efgen::cosine(query, embeddings_[i]);
    if (!found || sim > best.similarity) {
      best.ef_id = factors_[i].id;
      best.similarity = sim;
      found = true;
    }
  }
  if (!found) {
    if (!fallback) {
      throw_data_error("entry '" + entry.description + "' (" + entry.component_class +
                       ") has no emission factor with unit " + std::string(to_string(entry.unit)));
    }
    best.generate = true;
    return best;
  }
  best.generate = best.similarity < threshold;
  return best;
}

const EmissionFactor& EfMatcher::factor(const std::string& id) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), id,
                             [](const EmissionFactor& ef, const std::string& k) { return ef.id < k; });
  if (it == factors_.end() || it->id != id) throw_data_error("unknown emission factor '" + id + "'");
  return *it;
}

std::vector<const EmissionFactor*> EfMatcher::with_unit(Unit unit) const {
  std::vector<const EmissionFactor*> out;
  for (const auto& ef : factors_) {
    if (ef.unit == unit) out.push_back(&ef);
  }
  return out;
}

MatchResult match_entry(const InventoryEntry& entry, std::span<const EmissionFactor> db,
                        const efgen::EmbeddingProvider& provider, double threshold, bool fallback) {
  return EfMatcher(db, provider).match(entry, threshold, fallback);
}

}  // namespace carbonforge::lcia
