#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace carbonforge {

enum class FeatureKind { numeric, categorical };

std::string_view to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view text);

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::numeric;

  bool operator==(const FeatureSpec&) const = default;
};

/// Ordered, duplicate-free list of named feature slots.
class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<FeatureSpec> specs);

  std::size_t size() const noexcept { return specs_.size(); }
  bool empty() const noexcept { return specs_.empty(); }
  const FeatureSpec& operator[](std::size_t i) const { return specs_[i]; }
  const std::vector<FeatureSpec>& specs() const noexcept { return specs_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const FeatureSchema&) const = default;

 private:
  std::vector<FeatureSpec> specs_;
};

using SchemaPtr = std::shared_ptr<const FeatureSchema>;

SchemaPtr make_schema(std::vector<FeatureSpec> specs);

/// A present value is either a finite real (numeric slot) or a label
/// (categorical slot). std::nullopt is MISSING.
using FeatureValue = std::variant<double, std::string>;
using MaybeFeature = std::optional<FeatureValue>;

class FeatureVector {
 public:
  /// Values are positional and must match the schema in length and kind.
  FeatureVector(SchemaPtr schema, std::vector<MaybeFeature> values);

  /// Names absent from `values` are MISSING; unknown names are rejected.
  static FeatureVector from_map(SchemaPtr schema,
                                const std::map<std::string, FeatureValue>& values);

  /// Every slot MISSING.
  static FeatureVector missing(SchemaPtr schema);

  const FeatureSchema& schema() const noexcept { return *schema_; }
  const SchemaPtr& schema_ptr() const noexcept { return schema_; }
  std::size_t size() const noexcept { return values_.size(); }
  const MaybeFeature& operator[](std::size_t i) const { return values_[i]; }
  const MaybeFeature& at(std::string_view name) const;
  const std::vector<MaybeFeature>& values() const noexcept { return values_; }

  bool present(std::size_t i) const { return values_[i].has_value(); }
  std::size_t present_count() const noexcept;

  /// Copy with slot `i` replaced.
  FeatureVector with_value(std::size_t i, MaybeFeature value) const;

  bool operator==(const FeatureVector& other) const;

 private:
  SchemaPtr schema_;
  std::vector<MaybeFeature> values_;
};

/// (#present)/(#schema). Throws "degenerate schema" on an empty schema.
double completeness(const FeatureVector& v);

/// Numeric value of slot `i`; requires a present numeric slot.
double numeric_value(const FeatureVector& v, std::size_t i);

}  // namespace carbonforge
