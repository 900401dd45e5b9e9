#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "carbonforge/core/json.hpp"
#include "carbonforge/eval/metrics.hpp"
#include "carbonforge/knn/estimator.hpp"
#include "carbonforge/knn/index.hpp"

namespace carbonforge::eval {

struct Prediction {
  std::string id;
  double truth = 0.0;
  double mean = 0.0;
  double std = 0.0;
  bool in_ci95 = false;
};

/// Trains on `train` and predicts every record of `test`. Queries that
/// cannot be estimated are returned in `failures` (ids).
struct HoldoutResult {
  std::vector<Prediction> predictions;
  std::vector<std::string> failures;
  /// MAPE over successful predictions; nullopt if there are none.
  std::optional<double> mape;
};

HoldoutResult evaluate_holdout(std::span<const knn::IndexedRecord> train,
                               std::span<const knn::IndexedRecord> test,
                               const knn::EstimateOptions& config);

/// Seeded split: the first round(holdout·n) records of a permutation are the
/// test set.
struct Split {
  std::vector<knn::IndexedRecord> train;
  std::vector<knn::IndexedRecord> test;
};
Split holdout_split(std::span<const knn::IndexedRecord> records, double holdout, std::uint64_t seed);

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_size = 0;
  std::vector<std::string> test_ids;
  double mape = 0.0;
};

struct CvReport {
  std::size_t k_folds = 0;
  double holdout = 0.0;
  std::uint64_t seed = 0;
  std::vector<FoldResult> folds;
  MeanSd fold_mape;
  std::vector<std::string> holdout_ids;
  /// Model trained on the whole CV pool, tested on the holdout.
  std::optional<double> holdout_mape;
  std::optional<double> holdout_coverage;
};

/// Holdout first, then k folds over the rest: position i of the permuted
/// remainder goes to fold i mod k.
CvReport kfold_cv(std::span<const knn::IndexedRecord> records, std::size_t k_folds,
                  double holdout, std::uint64_t seed, const knn::EstimateOptions& config = {});

struct SweepPoint {
  double x = 0.0;
  std::vector<double> mapes;
  MeanSd summary;
  std::size_t failures = 0;
};

struct SweepReport {
  std::string kind;
  std::uint64_t seed = 0;
  std::vector<SweepPoint> points;
};

inline const std::vector<std::size_t> kDefaultSizes = {5, 10, 20, 40, 80, 120};

/// MAPE on a fixed eval set for `repeats` random training subsets per size.
SweepReport scaling_sweep(std::span<const knn::IndexedRecord> pool,
                          std::span<const knn::IndexedRecord> eval_set,
                          std::span<const std::size_t> sizes, std::size_t repeats,
                          std::uint64_t seed, const knn::EstimateOptions& config = {});
/// Same with a seeded 20% holdout of `records` as the eval set.
SweepReport scaling_sweep(std::span<const knn::IndexedRecord> records,
                          std::span<const std::size_t> sizes, std::size_t repeats,
                          std::uint64_t seed, const knn::EstimateOptions& config = {});

/// Masks exactly round(p·cells) feature cells uniformly over the whole
/// dataset. For p < 1 a record left with no present feature gets one
/// random cell back.
std::vector<knn::IndexedRecord> mask_features(std::span<const knn::IndexedRecord> records,
                                              double fraction, std::uint64_t seed);

/// Per fraction and repeat: mask the dataset, split off a fixed 20% eval
/// set, and record MAPE. A repeat where every query fails records +inf.
SweepReport masking_sweep(std::span<const knn::IndexedRecord> records,
                          std::span<const double> fractions, std::size_t repeats,
                          std::uint64_t seed, const knn::EstimateOptions& config = {});

json to_json(const CvReport& r);
json to_json(const SweepReport& r);
void write_csv(std::ostream& out, const CvReport& r);
void write_csv(std::ostream& out, const SweepReport& r);

}  // namespace carbonforge::eval
