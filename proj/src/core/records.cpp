#include "carbonforge/core/records.hpp"

#include <cmath>

#include "carbonforge/core/error.hpp"

namespace carbonforge {

void check_invariants(const EmissionFactor& ef) {
  if (ef.id.empty()) throw_data_error("emission factor without id");
  if (!std::isfinite(ef.kgco2e_per_unit) || ef.kgco2e_per_unit <= 0.0) {
    throw_data_error("emission factor '" + ef.id + "' must have kgco2e_per_unit > 0");
  }
}

std::string_view to_string(ProductCategory c) {
  switch (c) {
    case ProductCategory::desktop: return "desktop";
    case ProductCategory::display: return "display";
    case ProductCategory::laptop: return "laptop";
    case ProductCategory::phone: return "phone";
    case ProductCategory::other: return "other";
  }
  return "other";
}

std::optional<ProductCategory> try_parse_category(std::string_view text) {
  if (text == "desktop") return ProductCategory::desktop;
  if (text == "display") return ProductCategory::display;
  if (text == "laptop") return ProductCategory::laptop;
  if (text == "phone") return ProductCategory::phone;
  if (text == "other") return ProductCategory::other;
  return std::nullopt;
}

std::string record_id(const ProductRecord& r) {
  return r.company.empty() ? r.name : r.company + "/" + r.name;
}

void check_invariants(const ProductRecord& r) {
  if (!std::isfinite(r.reported_cf_kgco2e) || r.reported_cf_kgco2e <= 0.0) {
    throw_data_error("reported_cf_kgco2e must be > 0");
  }
  if (r.reported_uncertainty && !std::isfinite(*r.reported_uncertainty)) {
    throw_data_error("reported_uncertainty must be finite");
  }
  if (r.stage_shares) {
    double sum = 0.0;
    for (const auto& [stage, share] : *r.stage_shares) {
      if (!std::isfinite(share) || share < 0.0) {
        throw_data_error("stage share '" + stage + "' must be a non-negative number");
      }
      sum += share;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw_data_error("stage shares sum to " + std::to_string(sum) + ", expected 1");
    }
  }
}

}  // namespace carbonforge
