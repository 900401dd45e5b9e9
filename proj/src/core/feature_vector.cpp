#include "carbonforge/core/feature_vector.hpp"

#include <cmath>
#include <set>

#include "carbonforge/core/error.hpp"

namespace carbonforge {

std::string_view to_string(FeatureKind kind) {
  return kind == FeatureKind::numeric ? "numeric" : "categorical";
}

FeatureKind parse_feature_kind(std::string_view text) {
  if (text == "numeric") return FeatureKind::numeric;
  if (text == "categorical") return FeatureKind::categorical;
  throw_data_error("unknown feature kind '" + std::string(text) + "'");
}

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> specs) : specs_(std::move(specs)) {
  std::set<std::string> seen;
  for (const auto& s : specs_) {
    if (s.name.empty()) throw_data_error("feature schema contains an empty name");
    if (!seen.insert(s.name).second) {
      throw_data_error("feature schema repeats name '" + s.name + "'");
    }
  }
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (specs_[i].name == name) return i;
  }
  return std::nullopt;
}

SchemaPtr make_schema(std::vector<FeatureSpec> specs) {
  return std::make_shared<const FeatureSchema>(std::move(specs));
}

FeatureVector::FeatureVector(SchemaPtr schema, std::vector<MaybeFeature> values)
    : schema_(std::move(schema)), values_(std::move(values)) {
  if (!schema_) throw_data_error("feature vector without schema");
  if (values_.size() != schema_->size()) {
    throw_data_error("feature vector has " + std::to_string(values_.size()) +
                     " values for a schema of " + std::to_string(schema_->size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!values_[i]) continue;
    const auto& spec = (*schema_)[i];
    if (spec.kind == FeatureKind::numeric) {
      const double* x = std::get_if<double>(&*values_[i]);
      if (x == nullptr) throw_data_error("feature '" + spec.name + "' expects a number");
      if (!std::isfinite(*x)) throw_data_error("feature '" + spec.name + "' is not finite");
    } else if (!std::holds_alternative<std::string>(*values_[i])) {
      throw_data_error("feature '" + spec.name + "' expects a label");
    }
  }
}

FeatureVector FeatureVector::from_map(SchemaPtr schema,
                                      const std::map<std::string, FeatureValue>& values) {
  if (!schema) throw_data_error("feature vector without schema");
  std::vector<MaybeFeature> slots(schema->size());
  for (const auto& [name, value] : values) {
    auto idx = schema->index_of(name);
    if (!idx) throw_data_error("feature '" + name + "' is not in the schema");
    slots[*idx] = value;
  }
  return FeatureVector(std::move(schema), std::move(slots));
}

FeatureVector FeatureVector::missing(SchemaPtr schema) {
  const std::size_t n = schema ? schema->size() : 0;
  return FeatureVector(std::move(schema), std::vector<MaybeFeature>(n));
}

const MaybeFeature& FeatureVector::at(std::string_view name) const {
  auto idx = schema_->index_of(name);
  if (!idx) throw_data_error("feature '" + std::string(name) + "' is not in the schema");
  return values_[*idx];
}

std::size_t FeatureVector::present_count() const noexcept {
  std::size_t n = 0;
  for (const auto& v : values_) n += v.has_value() ? 1 : 0;
  return n;
}

FeatureVector FeatureVector::with_value(std::size_t i, MaybeFeature value) const {
  auto copy = values_;
  copy.at(i) = std::move(value);
  return FeatureVector(schema_, std::move(copy));
}

bool FeatureVector::operator==(const FeatureVector& other) const {
  if (schema_ != other.schema_ && !(*schema_ == *other.schema_)) return false;
  return values_ == other.values_;
}

double completeness(const FeatureVector& v) {
  if (v.schema().empty()) throw_data_error("degenerate schema");
  return static_cast<double>(v.present_count()) / static_cast<double>(v.size());
}

double numeric_value(const FeatureVector& v, std::size_t i) {
  const auto& slot = v[i];
  if (!slot) throw_data_error("feature '" + v.schema()[i].name + "' is missing");
  const double* x = std::get_if<double>(&*slot);
  if (x == nullptr) throw_data_error("feature '" + v.schema()[i].name + "' is not numeric");
  return *x;
}

}  // namespace carbonforge
