#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "carbonforge/core/feature_vector.hpp"
#include "carbonforge/core/inventory.hpp"

namespace carbonforge {

/// One LCA database row: kgCO2e per unit of some material or process.
struct EmissionFactor {
  std::string id;
  std::string description;
  std::string isic_class;
  Unit unit = Unit::gram;
  double kgco2e_per_unit = 1.0;
  /// Class-specific descriptors (melting point, phase, ...). May have an
  /// empty schema.
  FeatureVector features = FeatureVector::missing(make_schema({}));

  bool operator==(const EmissionFactor&) const = default;
};

/// Throws when kgco2e_per_unit is not a positive finite number or the id is empty.
void check_invariants(const EmissionFactor& ef);

enum class ProductCategory { desktop, display, laptop, phone, other };

std::string_view to_string(ProductCategory c);
std::optional<ProductCategory> try_parse_category(std::string_view text);

/// A vendor carbon-footprint disclosure joined with its product features.
struct ProductRecord {
  std::string company;
  ProductCategory category = ProductCategory::other;
  std::string name;
  FeatureVector features = FeatureVector::missing(make_schema({}));
  double reported_cf_kgco2e = 1.0;
  std::optional<double> reported_uncertainty;
  std::optional<std::map<std::string, double>> stage_shares;

  bool operator==(const ProductRecord&) const = default;
};

/// Stable identifier used when records enter an index: "company/name".
std::string record_id(const ProductRecord& r);

/// Throws when reported_cf_kgco2e <= 0 or stage shares do not sum to 1 ± 1e-6.
void check_invariants(const ProductRecord& r);

}  // namespace carbonforge
