#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "carbonforge/core/inventory.hpp"

namespace carbonforge::agent {

/// Product class of a free-text query by keyword rules ("electronics" when
/// nothing matches).
std::string classify_product(std::string_view query);

/// DA from the rule table: PCB, IC, sensor, passive and mechanical for every
/// electronic product, plus battery (capacity_wh) and display (display_type)
/// for portable and display products. An unknown product class gets the
/// base DA and a warning appended to `warnings`. Empty queries throw.
DataAbstraction build_data_abstraction(std::string_view query,
                                       std::vector<std::string>* warnings = nullptr);

}  // namespace carbonforge::agent
