#include "carbonforge/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "carbonforge/core/error.hpp"

namespace carbonforge::eval {

namespace {

void check_pair(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) {
    throw_data_error("prediction and truth lengths differ (" + std::to_string(pred.size()) +
                     " vs " + std::to_string(truth.size()) + ")");
  }
  if (pred.empty()) throw_data_error("metrics need at least one value");
}

}  // namespace

std::vector<double> ape(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth);
  std::vector<double> out(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (truth[i] == 0.0) throw_data_error("true value at index " + std::to_string(i) + " is zero");
    out[i] = std::abs(pred[i] - truth[i]) / std::abs(truth[i]) * 100.0;
  }
  return out;
}

double mape(std::span<const double> pred, std::span<const double> truth) {
  const auto errors = ape(pred, truth);
  double s = 0.0;
  for (double e : errors) s += e;
  return s / static_cast<double>(errors.size());
}

double mae(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth);
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - truth[i]);
  return s / static_cast<double>(pred.size());
}

double r2(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth);
  double mean = 0.0;
  for (double t : truth) mean += t;
  mean /= static_cast<double>(truth.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ss_res += (truth[i] - pred[i]) * (truth[i] - pred[i]);
    ss_tot += (truth[i] - mean) * (truth[i] - mean);
  }
  if (ss_tot == 0.0) {
    if (ss_res == 0.0) return 1.0;
    throw_data_error("R² is undefined for constant true values");
  }
  return 1.0 - ss_res / ss_tot;
}

MeanSd mean_sd(std::span<const double> values) {
  if (values.empty()) throw_data_error("mean of an empty list");
  MeanSd out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

Ecdf::Ecdf(std::vector<double> values) : sorted_(std::move(values)) {
  if (sorted_.empty()) throw_data_error("ECDF of an empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

Ecdf ecdf(std::span<const double> values) {
  return Ecdf(std::vector<double>(values.begin(), values.end()));
}

}  // namespace carbonforge::eval
