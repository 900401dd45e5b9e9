#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace carbonforge {

inline constexpr double kZ95 = 1.96;

struct Neighbor {
  std::string id;
  double distance = 0.0;
  double weight = 0.0;

  bool operator==(const Neighbor&) const = default;
};

/// Weighted-Gaussian estimate with the neighbours that produced it.
/// ci95 is always mean ± 1.96·std.
class EstimateDistribution {
 public:
  EstimateDistribution(double mean, double std, std::vector<Neighbor> neighbors,
                       std::string method_tag);

  double mean() const noexcept { return mean_; }
  double std() const noexcept { return std_; }
  std::pair<double, double> ci95() const noexcept { return {lo_, hi_}; }
  const std::vector<Neighbor>& neighbors() const noexcept { return neighbors_; }
  const std::string& method_tag() const noexcept { return method_tag_; }

  bool contains(double value) const noexcept { return lo_ <= value && value <= hi_; }

  bool operator==(const EstimateDistribution&) const = default;

 private:
  double mean_;
  double std_;
  double lo_;
  double hi_;
  std::vector<Neighbor> neighbors_;
  std::string method_tag_;
};

inline constexpr const char* kGeneratedEf = "generated";

struct EntryContribution {
  std::size_t entry_index = 0;
  std::string component_class;
  /// Matched emission-factor id, or "generated".
  std::string ef_id;
  double contribution_kgco2e = 0.0;
  /// Standard deviation of the contribution; zero for database matches.
  double contribution_std = 0.0;

  bool operator==(const EntryContribution&) const = default;
};

/// Carbon footprint split by inventory entry and component class. Totals are
/// derived from the per-entry rows at construction, so they agree by
/// construction.
class CFBreakdown {
 public:
  CFBreakdown() = default;
  explicit CFBreakdown(std::vector<EntryContribution> per_entry);

  double total_kgco2e() const noexcept { return total_; }
  /// sqrt of the summed per-entry variances (entries treated as independent).
  double total_std() const noexcept { return total_std_; }
  const std::vector<EntryContribution>& per_entry() const noexcept { return per_entry_; }
  const std::map<std::string, double>& per_class() const noexcept { return per_class_; }

  bool operator==(const CFBreakdown&) const = default;

 private:
  std::vector<EntryContribution> per_entry_;
  std::map<std::string, double> per_class_;
  double total_ = 0.0;
  double total_std_ = 0.0;
};

}  // namespace carbonforge
