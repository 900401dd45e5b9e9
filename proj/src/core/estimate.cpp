#include "carbonforge/core/estimate.hpp"

#include <cmath>

#include "carbonforge/core/error.hpp"

namespace carbonforge {

EstimateDistribution::EstimateDistribution(double mean, double std,
                                           std::vector<Neighbor> neighbors,
                                           std::string method_tag)
    : mean_(mean),
      std_(std),
      lo_(mean - kZ95 * std),
      hi_(mean + kZ95 * std),
      neighbors_(std::move(neighbors)),
      method_tag_(std::move(method_tag)) {
  if (!std::isfinite(mean_)) throw_data_error("estimate mean is not finite");
  if (!std::isfinite(std_) || std_ < 0.0) {
    throw_data_error("estimate std must be finite and non-negative");
  }
  for (const auto& n : neighbors_) {
    if (!std::isfinite(n.weight) || n.weight <= 0.0) {
      throw_data_error("neighbor '" + n.id + "' has a non-positive weight");
    }
  }
}

CFBreakdown::CFBreakdown(std::vector<EntryContribution> per_entry)
    : per_entry_(std::move(per_entry)) {
  double variance = 0.0;
  for (const auto& c : per_entry_) {
    if (!std::isfinite(c.contribution_kgco2e) || c.contribution_kgco2e < 0.0) {
      throw_data_error("entry " + std::to_string(c.entry_index) +
                       " has a negative or non-finite contribution");
    }
    total_ += c.contribution_kgco2e;
    per_class_[c.component_class] += c.contribution_kgco2e;
    variance += c.contribution_std * c.contribution_std;
  }
  total_std_ = std::sqrt(variance);
}

}  // namespace carbonforge
