#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "carbonforge/core/error.hpp"
#include "carbonforge/eval/experiments.hpp"
#include "carbonforge/eval/lci_metrics.hpp"
#include "carbonforge/eval/metrics.hpp"
#include "carbonforge/eval/synthetic.hpp"
#include "carbonforge/util/rng.hpp"
#include "oracles.hpp"

using namespace carbonforge;
using namespace carbonforge::eval;

namespace {

const DataAbstraction kDa("smartphone", {"PCB", "IC", "sensor", "passive"});

LifeCycleInventory inv(std::vector<InventoryEntry> entries) {
  LifeCycleInventory lci{"p", kDa, std::move(entries), {}};
  lci.provenance.assign(lci.entries.size(), "d");
  return lci;
}

InventoryEntry e(const char* cls, double qty, Unit u = Unit::count) { return {cls, "", qty, u, {}}; }

std::vector<knn::IndexedRecord> linear_dataset(std::size_t n, std::uint64_t seed) {
  const auto schema = make_schema({{"x", FeatureKind::numeric}, {"z", FeatureKind::numeric}});
  Rng rng(seed);
  std::vector<knn::IndexedRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(0.0, 10.0);
    const double z = rng.uniform(0.0, 10.0);
    char id[16];
    std::snprintf(id, sizeof id, "L%03zu", i);
    out.push_back({id, FeatureVector::from_map(schema, {{"x", x}, {"z", z}}), 50.0 + 10.0 * x + 3.0 * z});
  }
  return out;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("mape, ape and mae") {
  const std::vector<double> t = {100.0, 50.0};
  CHECK(mape(t, t) == 0.0);
  CHECK(mape(std::vector<double>{120.0}, std::vector<double>{100.0}) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(ape(std::vector<double>{90.0}, std::vector<double>{100.0})[0] == doctest::Approx(10.0));
  CHECK(mae(std::vector<double>{1.0, 5.0}, std::vector<double>{2.0, 2.0}) == 2.0);

  try {
    mape(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 0.0});
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(std::string(err.what()).find("1") != std::string::npos);
  }
  CHECK_THROWS_AS(mape(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}), Error);
  CHECK_THROWS_AS(mape(std::vector<double>{}, std::vector<double>{}), Error);

  Rng rng(50);
  std::vector<double> p, q;
  for (int i = 0; i < 50; ++i) {
    p.push_back(rng.uniform(1.0, 100.0));
    q.push_back(rng.uniform(1.0, 100.0));
  }
  CHECK(oracle::close_rel(mape(p, q), oracle::mape_percent(p, q), 1e-12));
}

TEST_CASE("r2") {
  const std::vector<double> t = {1.0, 2.0, 4.0, 8.0};
  CHECK(r2(t, t) == 1.0);
  const std::vector<double> flat(4, 3.75);
  CHECK(r2(flat, t) == doctest::Approx(0.0).scale(1.0));
  Rng rng(2);
  std::vector<double> p, q;
  for (int i = 0; i < 50; ++i) {
    p.push_back(rng.normal());
    q.push_back(rng.normal());
  }
  CHECK(oracle::close_rel(r2(p, q), oracle::r_squared(p, q), 1e-12));
  CHECK(r2(p, q) <= 1.0);
}

TEST_CASE("mean_sd and ecdf") {
  const auto m = mean_sd(std::vector<double>{2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0});
  CHECK(m.mean == 5.0);
  CHECK(m.sd == doctest::Approx(std::sqrt(32.0 / 7.0)));
  CHECK(mean_sd(std::vector<double>{3.0}).sd == 0.0);

  const auto f = ecdf(std::vector<double>{3.0, 1.0, 2.0, 2.0});
  CHECK(f(0.5) == 0.0);
  CHECK(f(1.0) == 0.25);
  CHECK(f(2.0) == 0.75);
  CHECK(f(2.5) == 0.75);
  CHECK(f(3.0) == 1.0);
  CHECK(f.steps() == std::vector<double>{1.0, 2.0, 2.0, 3.0});
}

TEST_CASE("metrics are permutation equivariant") {
  std::vector<double> p = {10, 20, 30, 40}, t = {12, 18, 33, 39};
  const double m = mape(p, t), r = r2(p, t);
  std::swap(p[0], p[3]);
  std::swap(t[0], t[3]);
  CHECK(mape(p, t) == doctest::Approx(m).epsilon(1e-15));
  CHECK(r2(p, t) == doctest::Approx(r).epsilon(1e-15));
}

TEST_CASE("lci_f1") {
  const auto ref = inv({e("IC", 1), e("IC", 1), e("PCB", 1), e("sensor", 1)});
  CHECK(lci_f1(ref, ref) == 1.0);
  CHECK(lci_f1(inv({e("passive", 1)}), inv({e("IC", 1)})) == 0.0);
  const auto pred = inv({e("IC", 1), e("IC", 1), e("IC", 1), e("PCB", 1)});
  CHECK(lci_f1(pred, ref) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("lci_jsd") {
  const auto a = inv({e("IC", 2), e("PCB", 2)});
  CHECK(lci_jsd(a, a) == doctest::Approx(0.0).scale(1.0));
  CHECK(lci_jsd(inv({e("IC", 2)}), inv({e("PCB", 5)})) == doctest::Approx(1.0));
  const double want = oracle::jsd_bits({0.5, 0.5}, {1.0, 0.0});
  CHECK(std::abs(lci_jsd(a, inv({e("IC", 7)})) - want) < 1e-12);
  CHECK(std::abs(want - 0.3113) < 1e-4);
  CHECK_THROWS_AS(lci_jsd(inv({}), a), Error);
  // Different units never share a bucket.
  CHECK(lci_jsd(inv({e("PCB", 3, Unit::mm2)}), inv({e("PCB", 3, Unit::count)})) == doctest::Approx(1.0));
}

TEST_CASE("lci_l1") {
  CHECK(lci_l1(inv({e("IC", 3)}), inv({e("IC", 3)})) == 0.0);
  CHECK(lci_l1(inv({e("IC", 3)}), inv({e("IC", 2)})) == 1.0);

  Rng rng(8);
  const char* classes[] = {"PCB", "IC", "sensor", "passive"};
  std::vector<InventoryEntry> pe, re;
  std::map<std::string, double> diff;
  for (int i = 0; i < 12; ++i) {
    const char* c = classes[rng.index(4)];
    const double q = rng.uniform(0.0, 10.0);
    pe.push_back(e(c, q));
    diff[c] += q;
    const char* d = classes[rng.index(4)];
    const double r = rng.uniform(0.0, 10.0);
    re.push_back(e(d, r));
    diff[d] -= r;
  }
  double want = 0.0;
  for (const auto& [c, v] : diff) want += std::abs(v);
  CHECK(oracle::close_rel(lci_l1(inv(pe), inv(re)), want, 1e-12));
}

TEST_CASE("kfold partitions") {
  const auto records = linear_dataset(10, 1);
  const auto r = kfold_cv(records, 5, 0.0, 42);
  REQUIRE(r.folds.size() == 5);
  std::multiset<std::string> tested;
  for (const auto& f : r.folds) {
    CHECK(f.test_ids.size() == 2);
    CHECK(f.train_size == 8);
    tested.insert(f.test_ids.begin(), f.test_ids.end());
  }
  CHECK(tested.size() == 10);
  CHECK(std::set<std::string>(tested.begin(), tested.end()).size() == 10);

  const auto again = kfold_cv(records, 5, 0.0, 42);
  for (std::size_t i = 0; i < 5; ++i) CHECK(again.folds[i].test_ids == r.folds[i].test_ids);
  CHECK(to_json(again) == to_json(r));

  CHECK_THROWS_AS(kfold_cv(linear_dataset(4, 1), 5, 0.0, 1), Error);
  CHECK_THROWS_AS(kfold_cv(records, 1, 0.0, 1), Error);
}

TEST_CASE("kfold MAPE matches a reference run of the same splits") {
  const auto records = linear_dataset(60, 3);
  const auto r = kfold_cv(records, 5, 0.2, 7);
  CHECK(r.holdout_ids.size() == 12);
  std::map<std::string, knn::IndexedRecord> by_id;
  for (const auto& x : records) by_id.emplace(x.id, x);
  std::set<std::string> held(r.holdout_ids.begin(), r.holdout_ids.end());

  std::vector<double> fold_mapes;
  for (const auto& f : r.folds) {
    std::set<std::string> test(f.test_ids.begin(), f.test_ids.end());
    std::vector<knn::IndexedRecord> train;
    for (const auto& x : records) {
      if (!test.count(x.id) && !held.count(x.id)) train.push_back(x);
    }
    CHECK(train.size() == f.train_size);
    std::vector<double> pred, truth;
    for (const auto& id : f.test_ids) {
      pred.push_back(oracle::brute_force_knn(train, by_id.at(id).features, 5).mean);
      truth.push_back(by_id.at(id).target);
    }
    const double m = oracle::mape_percent(pred, truth);
    CHECK(oracle::close_rel(f.mape, m, 1e-9));
    fold_mapes.push_back(m);
  }
  double mean = 0.0;
  for (double m : fold_mapes) mean += m;
  CHECK(oracle::close_rel(r.fold_mape.mean, mean / fold_mapes.size(), 1e-9));

  std::vector<knn::IndexedRecord> pool;
  for (const auto& x : records) {
    if (!held.count(x.id)) pool.push_back(x);
  }
  std::vector<double> pred, truth;
  for (const auto& id : r.holdout_ids) {
    pred.push_back(oracle::brute_force_knn(pool, by_id.at(id).features, 5).mean);
    truth.push_back(by_id.at(id).target);
  }
  REQUIRE(r.holdout_mape.has_value());
  CHECK(oracle::close_rel(*r.holdout_mape, oracle::mape_percent(pred, truth), 1e-9));
}

TEST_CASE("scaling sweep") {
  const auto records = synthetic_products(160, 5);
  const auto full = holdout_split(records, 0.2, 5);
  const std::vector<std::size_t> all = {full.train.size()};
  const auto single = scaling_sweep(full.train, full.test, all, 4, 5);
  REQUIRE(single.points.size() == 1);
  for (double m : single.points[0].mapes) CHECK(m == single.points[0].mapes[0]);
  CHECK(single.points[0].summary.sd == 0.0);

  const auto report = scaling_sweep(records, kDefaultSizes, 10, 5);
  CHECK(report.kind == "scaling");
  REQUIRE(report.points.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(report.points[i].x == kDefaultSizes[i]);
    CHECK(report.points[i].mapes.size() == 10);
  }
  CHECK(report.points.back().summary.mean < report.points.front().summary.mean);
  for (std::size_t i = 1; i < 6; ++i) {
    CHECK(report.points[i].summary.mean <= report.points[i - 1].summary.mean + report.points[i - 1].summary.sd);
  }
  CHECK(to_json(report) == to_json(scaling_sweep(records, kDefaultSizes, 10, 5)));

  const std::vector<std::size_t> too_big = {1000};
  CHECK_THROWS_AS(scaling_sweep(records, too_big, 2, 5), Error);

  std::ostringstream csv;
  write_csv(csv, report);
  CHECK(csv.str().rfind("x,repeat,mape\n", 0) == 0);
}

TEST_CASE("masking") {
  const auto records = grid_records_to_dataset(synthetic_grid_world(200, 4));
  std::size_t cells = 0;
  for (const auto& r : records) cells += r.features.size();
  const auto half = mask_features(records, 0.5, 9);
  std::size_t present = 0;
  for (const auto& r : half) {
    CHECK(r.features.present_count() >= 1);
    present += r.features.present_count();
  }
  CHECK(present >= cells / 2);
  CHECK(present <= cells / 2 + records.size());

  const std::vector<double> fractions = {0.0, 0.3, 1.0};
  const auto report = masking_sweep(records, fractions, 3, 11, {5, 3});
  REQUIRE(report.points.size() == 3);
  const auto split = holdout_split(records, 0.2, 11);
  const auto base = evaluate_holdout(split.train, split.test, {5, 3});
  for (double m : report.points[0].mapes) CHECK(m == doctest::Approx(*base.mape).epsilon(1e-12));
  CHECK(report.points[0].failures == 0);
  for (double m : report.points[2].mapes) CHECK(std::isinf(m));
  CHECK(report.points[2].failures > 0);
  CHECK(to_json(report)["points"][2]["mapes"][0].is_null());

  std::ostringstream csv;
  write_csv(csv, report);
  CHECK(csv.str().find("inf") != std::string::npos);
}

TEST_CASE("holdout coverage is reported") {
  const auto records = synthetic_gaussian_clusters(20, 12, 3);
  const auto r = kfold_cv(records, 5, 0.2, 1, {10, 1});
  REQUIRE(r.holdout_coverage.has_value());
  CHECK(*r.holdout_coverage >= 0.0);
  CHECK(*r.holdout_coverage <= 1.0);
}

TEST_CASE("synthetic grid world is a linear mix") {
  const auto world = synthetic_grid_world(50, 1, 0.0);
  for (const auto& g : world) {
    CHECK(oracle::close_rel(g.carbon_intensity_g_per_kwh, mix_intensity(g.source_shares), 1e-12));
    double direct = 0.0;
    for (std::size_t i = 0; i < kSourceIntensity.size(); ++i) {
      direct += std::get<double>(*g.source_shares[i]) * kSourceIntensity[i];
    }
    CHECK(oracle::close_rel(g.carbon_intensity_g_per_kwh, direct, 1e-12));
  }
}

}
