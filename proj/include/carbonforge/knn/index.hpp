#pragma once

#include <span>
#include <string>
#include <vector>

#include "carbonforge/core/feature_vector.hpp"
#include "carbonforge/core/json.hpp"
#include "carbonforge/core/records.hpp"

namespace carbonforge::knn {

struct IndexedRecord {
  std::string id;
  FeatureVector features;
  double target = 0.0;

  bool operator==(const IndexedRecord&) const = default;
};

/// Per-slot z-score parameters. Categorical slots and slots with no present
/// value hold (0, 1); a zero spread is stored as 1.
struct Normalization {
  std::vector<double> mean;
  std::vector<double> std;

  bool operator==(const Normalization&) const = default;
};

Normalization compute_normalization(const FeatureSchema& schema,
                                    std::span<const IndexedRecord> records);

/// Immutable set of training records plus their normalization statistics.
class TrainedIndex {
 public:
  /// Throws on empty input, mixed schemas, duplicate ids or non-finite
  /// targets.
  TrainedIndex(std::vector<IndexedRecord> records, std::string category);

  const std::vector<IndexedRecord>& records() const noexcept { return records_; }
  const Normalization& normalization() const noexcept { return norm_; }
  const std::string& category() const noexcept { return category_; }
  const SchemaPtr& schema_ptr() const noexcept { return records_.front().features.schema_ptr(); }
  const FeatureSchema& schema() const noexcept { return *schema_ptr(); }
  std::size_t size() const noexcept { return records_.size(); }

  bool operator==(const TrainedIndex&) const = default;

 private:
  std::vector<IndexedRecord> records_;
  Normalization norm_;
  std::string category_;
};

TrainedIndex build_index(std::vector<IndexedRecord> records, std::string category);
/// Index over product records: id = company/name, target = reported CF.
TrainedIndex build_index(std::span<const ProductRecord> records, std::string category);

/// New index with `record` appended; statistics are recomputed.
TrainedIndex add_record(const TrainedIndex& index, IndexedRecord record);

json index_to_json(const TrainedIndex& index);
/// Statistics are recomputed from the records; stored ones must agree.
TrainedIndex index_from_json(const json& j);

}  // namespace carbonforge::knn
