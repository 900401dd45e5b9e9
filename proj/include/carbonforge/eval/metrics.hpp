#pragma once

#include <span>
#include <vector>

namespace carbonforge::eval {

/// Absolute percentage error per element, in percent.
std::vector<double> ape(std::span<const double> pred, std::span<const double> truth);
/// mean(|p−t|/|t|)·100. A zero true value is an error naming its index.
double mape(std::span<const double> pred, std::span<const double> truth);
double mae(std::span<const double> pred, std::span<const double> truth);
/// 1 − SS_res/SS_tot. Constant truth is an error unless the fit is exact.
double r2(std::span<const double> pred, std::span<const double> truth);

struct MeanSd {
  double mean = 0.0;
  /// Sample standard deviation (n−1); 0 for a single value.
  double sd = 0.0;
};

MeanSd mean_sd(std::span<const double> values);

/// Right-continuous empirical CDF.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> values);
  /// Fraction of values ≤ x.
  double operator()(double x) const;
  /// Sorted sample (the step locations).
  const std::vector<double>& steps() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

Ecdf ecdf(std::span<const double> values);

}  // namespace carbonforge::eval
