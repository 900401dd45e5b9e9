#include "carbonforge/eval/experiments.hpp"

#include <cmath>
#include <limits>

#include "carbonforge/core/error.hpp"
#include "carbonforge/util/csv.hpp"
#include "carbonforge/util/rng.hpp"

namespace carbonforge::eval {

namespace {

std::uint64_t substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return mix64(seed ^ mix64(a * 0x9e3779b97f4a7c15ULL + b + 1));
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

HoldoutResult evaluate_holdout(std::span<const knn::IndexedRecord> train,
                               std::span<const knn::IndexedRecord> test,
                               const knn::EstimateOptions& config) {
  const auto index = knn::build_index(std::vector<knn::IndexedRecord>(train.begin(), train.end()),
                                      "eval");
  HoldoutResult out;
  std::vector<double> pred, truth;
  for (const auto& r : test) {
    try {
      const auto e = knn::estimate(index, r.features, config);
      out.predictions.push_back({r.id, r.target, e.mean(), e.std(), e.contains(r.target)});
      pred.push_back(e.mean());
      truth.push_back(r.target);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::data) throw;
      out.failures.push_back(r.id);
    }
  }
  if (!pred.empty()) out.mape = mape(pred, truth);
  return out;
}

Split holdout_split(std::span<const knn::IndexedRecord> records, double holdout,
                    std::uint64_t seed) {
  if (holdout < 0.0 || holdout >= 1.0) throw_usage_error("holdout must be in [0,1)");
  Rng rng(seed);
  const auto perm = rng.permutation(records.size());
  const auto n_test =
      static_cast<std::size_t>(std::llround(holdout * static_cast<double>(records.size())));
  Split s;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    (i < n_test ? s.test : s.train).push_back(records[perm[i]]);
  }
  return s;
}

CvReport kfold_cv(std::span<const knn::IndexedRecord> records, std::size_t k_folds,
                  double holdout, std::uint64_t seed, const knn::EstimateOptions& config) {
  if (k_folds < 2) throw_usage_error("k_folds must be at least 2");
  auto split = holdout_split(records, holdout, seed);
  if (split.train.size() < k_folds) {
    throw_data_error("too few records (" + std::to_string(split.train.size()) + ") for " +
                     std::to_string(k_folds) + " folds");
  }
  CvReport report;
  report.k_folds = k_folds;
  report.holdout = holdout;
  report.seed = seed;
  for (const auto& r : split.test) report.holdout_ids.push_back(r.id);

  std::vector<double> fold_mapes;
  for (std::size_t f = 0; f < k_folds; ++f) {
    std::vector<knn::IndexedRecord> train, test;
    for (std::size_t i = 0; i < split.train.size(); ++i) {
      (i % k_folds == f ? test : train).push_back(split.train[i]);
    }
    const auto res = evaluate_holdout(train, test, config);
    if (!res.mape) throw_data_error("fold " + std::to_string(f) + " produced no estimates");
    FoldResult fr{f, train.size(), {}, *res.mape};
    for (const auto& r : test) fr.test_ids.push_back(r.id);
    fold_mapes.push_back(fr.mape);
    report.folds.push_back(std::move(fr));
  }
  report.fold_mape = mean_sd(fold_mapes);

  if (!split.test.empty()) {
    const auto res = evaluate_holdout(split.train, split.test, config);
    report.holdout_mape = res.mape;
    std::size_t covered = 0;
    for (const auto& p : res.predictions) covered += p.in_ci95 ? 1 : 0;
    if (!res.predictions.empty()) {
      report.holdout_coverage =
          static_cast<double>(covered) / static_cast<double>(res.predictions.size());
    }
  }
  return report;
}

SweepReport scaling_sweep(std::span<const knn::IndexedRecord> pool,
                          std::span<const knn::IndexedRecord> eval_set,
                          std::span<const std::size_t> sizes, std::size_t repeats,
                          std::uint64_t seed, const knn::EstimateOptions& config) {
  if (repeats == 0) throw_usage_error("repeats must be positive");
  if (eval_set.empty()) throw_data_error("scaling sweep needs a non-empty eval set");
  SweepReport report{"scaling", seed, {}};
  for (std::size_t size : sizes) {
    if (size == 0 || size > pool.size()) {
      throw_data_error("train size " + std::to_string(size) + " outside [1, " +
                       std::to_string(pool.size()) + "]");
    }
    SweepPoint point;
    point.x = static_cast<double>(size);
    for (std::size_t rep = 0; rep < repeats; ++rep) {
      Rng rng(substream(seed, size, rep));
      const auto perm = rng.permutation(pool.size());
      std::vector<knn::IndexedRecord> train;
      // Index order does not affect estimates; keep pool order for
      // readability of the subset.
      std::vector<bool> take(pool.size(), false);
      for (std::size_t i = 0; i < size; ++i) take[perm[i]] = true;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (take[i]) train.push_back(pool[i]);
      }
      const auto res = evaluate_holdout(train, eval_set, config);
      point.failures += res.failures.size();
      point.mapes.push_back(res.mape.value_or(std::numeric_limits<double>::infinity()));
    }
    point.summary = mean_sd(point.mapes);
    report.points.push_back(std::move(point));
  }
  return report;
}

SweepReport scaling_sweep(std::span<const knn::IndexedRecord> records,
                          std::span<const std::size_t> sizes, std::size_t repeats,
                          std::uint64_t seed, const knn::EstimateOptions& config) {
  const auto split = holdout_split(records, 0.2, seed);
  return scaling_sweep(split.train, split.test, sizes, repeats, seed, config);
}

std::vector<knn::IndexedRecord> mask_features(std::span<const knn::IndexedRecord> records,
                                              double fraction, std::uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0) throw_usage_error("missing fraction must be in [0,1]");
  std::vector<knn::IndexedRecord> out(records.begin(), records.end());
  if (out.empty()) return out;
  const std::size_t d = out.front().features.size();
  const std::size_t cells = out.size() * d;
  const auto n_mask =
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(cells)));
  Rng rng(seed);
  const auto perm = rng.permutation(cells);
  std::vector<std::vector<MaybeFeature>> values;
  for (const auto& r : out) values.push_back(r.features.values());
  for (std::size_t i = 0; i < n_mask; ++i) values[perm[i] / d][perm[i] % d].reset();
  for (std::size_t r = 0; r < out.size(); ++r) {
    bool any = false;
    for (const auto& v : values[r]) any = any || v.has_value();
    if (!any && fraction < 1.0 && d > 0) {
      const std::size_t slot = rng.index(d);
      values[r][slot] = out[r].features[slot];
    }
    out[r].features = FeatureVector(out[r].features.schema_ptr(), std::move(values[r]));
  }
  return out;
}

SweepReport masking_sweep(std::span<const knn::IndexedRecord> records,
                          std::span<const double> fractions, std::size_t repeats,
                          std::uint64_t seed, const knn::EstimateOptions& config) {
  if (repeats == 0) throw_usage_error("repeats must be positive");
  SweepReport report{"masking", seed, {}};
  for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
    SweepPoint point;
    point.x = fractions[fi];
    for (std::size_t rep = 0; rep < repeats; ++rep) {
      const auto masked = mask_features(records, fractions[fi], substream(seed, fi, rep));
      const auto split = holdout_split(masked, 0.2, seed);
      HoldoutResult res;
      try {
        res = evaluate_holdout(split.train, split.test, config);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::data) throw;
        res.failures.resize(split.test.size());
      }
      point.failures += res.failures.size();
      point.mapes.push_back(res.mape.value_or(std::numeric_limits<double>::infinity()));
    }
    point.summary = mean_sd(point.mapes);
    report.points.push_back(std::move(point));
  }
  return report;
}

json to_json(const CvReport& r) {
  json folds = json::array();
  for (const auto& f : r.folds) {
    folds.push_back({{"fold", f.fold},
                     {"train_size", f.train_size},
                     {"test_ids", f.test_ids},
                     {"mape", f.mape}});
  }
  return json{{"k_folds", r.k_folds},
              {"holdout", r.holdout},
              {"seed", r.seed},
              {"folds", folds},
              {"mape_mean", r.fold_mape.mean},
              {"mape_sd", r.fold_mape.sd},
              {"holdout_ids", r.holdout_ids},
              {"holdout_mape", r.holdout_mape ? json(*r.holdout_mape) : json(nullptr)},
              {"holdout_ci95_coverage",
               r.holdout_coverage ? json(*r.holdout_coverage) : json(nullptr)}};
}

json to_json(const SweepReport& r) {
  json points = json::array();
  for (const auto& p : r.points) {
    json mapes = json::array();
    for (double m : p.mapes) mapes.push_back(number_or_null(m));
    points.push_back({{"x", p.x},
                      {"mapes", mapes},
                      {"mape_mean", number_or_null(p.summary.mean)},
                      {"mape_sd", number_or_null(p.summary.sd)},
                      {"failures", p.failures}});
  }
  return json{{"kind", r.kind}, {"seed", r.seed}, {"points", points}};
}

void write_csv(std::ostream& out, const CvReport& r) {
  out << "fold,train_size,test_size,mape\n";
  for (const auto& f : r.folds) {
    out << f.fold << ',' << f.train_size << ',' << f.test_ids.size() << ','
        << csv::format_number(f.mape) << '\n';
  }
}

void write_csv(std::ostream& out, const SweepReport& r) {
  out << "x,repeat,mape\n";
  for (const auto& p : r.points) {
    for (std::size_t i = 0; i < p.mapes.size(); ++i) {
      out << csv::format_number(p.x) << ',' << i << ','
          << (std::isfinite(p.mapes[i]) ? csv::format_number(p.mapes[i]) : "inf") << '\n';
    }
  }
}

}  // namespace carbonforge::eval
