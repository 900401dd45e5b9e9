#include "carbonforge/knn/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "carbonforge/core/error.hpp"

namespace carbonforge::knn {

double median(std::span<const double> values) {
  if (values.empty()) throw_data_error("median of an empty list");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

CalibrationTransform fit_calibration(std::span<const double> source_targets,
                                     std::span<const double> target_targets) {
  if (source_targets.empty() || target_targets.empty()) {
    throw_data_error("calibration needs non-empty source and target lists");
  }
  const double ms = median(source_targets);
  const double mt = median(target_targets);
  if (!(ms > 0.0) || !(mt > 0.0)) throw_data_error("calibration medians must be positive");
  return {mt / ms, 0.0};
}

EstimateDistribution apply_calibration(const CalibrationTransform& t,
                                       const EstimateDistribution& e) {
  if (!(t.scale > 0.0)) throw_data_error("calibration scale must be positive");
  return EstimateDistribution(t.scale * e.mean() + t.shift, t.scale * e.std(), e.neighbors(),
                              e.method_tag());
}

CalibrationTransform compose(const CalibrationTransform& first,
                             const CalibrationTransform& second) {
  return {second.scale * first.scale, second.scale * first.shift + second.shift};
}

void to_json(json& j, const CalibrationTransform& t) {
  j = json{{"scale", t.scale}, {"shift", t.shift}};
}

void from_json(const json& j, CalibrationTransform& t) {
  if (!j.is_object() || !j.contains("scale")) throw_data_error("calibration needs 'scale'");
  t.scale = j.at("scale").get<double>();
  t.shift = j.value("shift", 0.0);
  if (!(t.scale > 0.0) || !std::isfinite(t.scale) || !std::isfinite(t.shift)) {
    throw_data_error("calibration scale must be positive and finite");
  }
}

}  // namespace carbonforge::knn
