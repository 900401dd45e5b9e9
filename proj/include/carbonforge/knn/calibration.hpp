#pragma once

#include <span>

#include "carbonforge/core/estimate.hpp"
#include "carbonforge/core/json.hpp"

namespace carbonforge::knn {

struct CalibrationTransform {
  double scale = 1.0;
  double shift = 0.0;

  bool operator==(const CalibrationTransform&) const = default;
};

double median(std::span<const double> values);

/// scale = median(target)/median(source), shift = 0.
CalibrationTransform fit_calibration(std::span<const double> source_targets,
                                     std::span<const double> target_targets);

/// mean' = scale·mean + shift, std' = scale·std; neighbours kept.
EstimateDistribution apply_calibration(const CalibrationTransform& t,
                                       const EstimateDistribution& e);

/// Transform equal to applying `first` then `second`.
CalibrationTransform compose(const CalibrationTransform& first,
                             const CalibrationTransform& second);

void to_json(json& j, const CalibrationTransform& t);
void from_json(const json& j, CalibrationTransform& t);

}  // namespace carbonforge::knn
