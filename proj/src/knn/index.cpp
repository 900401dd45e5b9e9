#include "carbonforge/knn/index.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "carbonforge/core/error.hpp"

namespace carbonforge::knn {

namespace {

// Sorted summation keeps the statistics independent of record order.
double ordered_sum(std::vector<double>& xs) {
  std::sort(xs.begin(), xs.end());
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

}  // namespace

Normalization compute_normalization(const FeatureSchema& schema,
                                    std::span<const IndexedRecord> records) {
  Normalization norm{std::vector<double>(schema.size(), 0.0),
                     std::vector<double>(schema.size(), 1.0)};
  std::vector<double> xs;
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (schema[i].kind != FeatureKind::numeric) continue;
    xs.clear();
    for (const auto& r : records) {
      if (r.features.present(i)) xs.push_back(numeric_value(r.features, i));
    }
    if (xs.empty()) continue;
    const double n = static_cast<double>(xs.size());
    const double mean = ordered_sum(xs) / n;
    for (double& x : xs) x = (x - mean) * (x - mean);
    const double sd = std::sqrt(ordered_sum(xs) / n);
    norm.mean[i] = mean;
    norm.std[i] = (sd > 0.0 && std::isfinite(sd)) ? sd : 1.0;
  }
  return norm;
}

TrainedIndex::TrainedIndex(std::vector<IndexedRecord> records, std::string category)
    : records_(std::move(records)), category_(std::move(category)) {
  if (records_.empty()) throw_data_error("cannot build an index from zero records");
  const auto& schema = records_.front().features.schema();
  std::set<std::string> ids;
  for (const auto& r : records_) {
    if (!(r.features.schema() == schema)) {
      throw_data_error("record '" + r.id + "' does not share the index feature schema");
    }
    if (!std::isfinite(r.target)) throw_data_error("record '" + r.id + "' has a non-finite target");
    if (!ids.insert(r.id).second) throw_data_error("duplicate record id '" + r.id + "'");
  }
  norm_ = compute_normalization(schema, records_);
}

TrainedIndex build_index(std::vector<IndexedRecord> records, std::string category) {
  return TrainedIndex(std::move(records), std::move(category));
}

TrainedIndex build_index(std::span<const ProductRecord> records, std::string category) {
  std::vector<IndexedRecord> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back({record_id(r), r.features, r.reported_cf_kgco2e});
  return TrainedIndex(std::move(rows), std::move(category));
}

TrainedIndex add_record(const TrainedIndex& index, IndexedRecord record) {
  if (!(record.features.schema() == index.schema())) {
    throw_data_error("record '" + record.id + "' does not match the index schema");
  }
  auto rows = index.records();
  rows.push_back(std::move(record));
  return TrainedIndex(std::move(rows), index.category());
}

json index_to_json(const TrainedIndex& index) {
  json records = json::array();
  for (const auto& r : index.records()) {
    records.push_back({{"id", r.id}, {"values", values_to_json(r.features)}, {"target", r.target}});
  }
  json norm = json::array();
  const auto& schema = index.schema();
  for (std::size_t i = 0; i < schema.size(); ++i) {
    norm.push_back({{"name", schema[i].name},
                    {"mean", index.normalization().mean[i]},
                    {"std", index.normalization().std[i]}});
  }
  return json{{"category", index.category()},
              {"schema", schema},
              {"records", records},
              {"normalization", norm}};
}

TrainedIndex index_from_json(const json& j) {
  if (!j.is_object() || !j.contains("schema") || !j.contains("records")) {
    throw_data_error("index snapshot needs 'schema' and 'records'");
  }
  std::vector<IndexedRecord> rows;
  SchemaPtr schema;
  try {
    schema = std::make_shared<const FeatureSchema>(j.at("schema").get<FeatureSchema>());
    for (const auto& r : j.at("records")) {
      rows.push_back({r.at("id").get<std::string>(),
                      values_from_json(schema, r.value("values", json::object())),
                      r.at("target").get<double>()});
    }
  } catch (const json::exception& e) {
    throw_data_error(std::string("index snapshot: ") + e.what());
  }
  TrainedIndex index(std::move(rows), j.value("category", std::string{}));
  if (j.contains("normalization")) {
    const auto& stored = j.at("normalization");
    const auto& norm = index.normalization();
    if (!stored.is_array() || stored.size() != schema->size()) {
      throw_data_error("index snapshot normalization does not match the schema");
    }
    for (std::size_t i = 0; i < schema->size(); ++i) {
      const double m = stored[i].value("mean", 0.0);
      const double s = stored[i].value("std", 1.0);
      const auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
      };
      if (!close(m, norm.mean[i]) || !close(s, norm.std[i])) {
        throw_data_error("index snapshot normalization for '" + (*schema)[i].name +
                         "' disagrees with its records");
      }
    }
  }
  return index;
}

}  // namespace carbonforge::knn
