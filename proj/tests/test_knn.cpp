#include <doctest.h>

#include <fstream>

#include "carbonforge/core/error.hpp"
#include "carbonforge/core/json.hpp"
#include "carbonforge/eval/synthetic.hpp"
#include "carbonforge/knn/calibration.hpp"
#include "carbonforge/knn/estimator.hpp"
#include "carbonforge/knn/index.hpp"
#include "carbonforge/util/rng.hpp"
#include "oracles.hpp"

using namespace carbonforge;
using namespace carbonforge::knn;

namespace {

SchemaPtr four_numeric() {
  return make_schema({{"a", FeatureKind::numeric},
                      {"b", FeatureKind::numeric},
                      {"c", FeatureKind::numeric},
                      {"d", FeatureKind::categorical}});
}

IndexedRecord rec(const std::string& id, std::map<std::string, FeatureValue> v, double y,
                  SchemaPtr s = four_numeric()) {
  return {id, FeatureVector::from_map(std::move(s), v), y};
}

void check_matches_oracle(const std::vector<IndexedRecord>& records,
                          const std::vector<IndexedRecord>& queries, std::size_t k) {
  const auto index = build_index(records, "synthetic");
  for (const auto& q : queries) {
    const auto got = estimate(index, q.features, k);
    const auto want = oracle::brute_force_knn(records, q.features, k);
    std::vector<std::string> ids;
    for (const auto& n : got.neighbors()) ids.push_back(n.id);
    CHECK(ids == want.ids);
    CHECK(oracle::close_rel(got.mean(), want.mean, 1e-12));
    CHECK(oracle::close_rel(got.std(), want.std, 1e-12));
  }
}

}  // namespace

TEST_SUITE("knn") {

TEST_CASE("build_index") {
  const auto one = build_index({rec("r1", {{"a", 1.0}}, 5.0)}, "c");
  CHECK(one.size() == 1);
  CHECK_THROWS_AS(build_index(std::vector<IndexedRecord>{}, "c"), Error);

  const auto flat = build_index({rec("r1", {{"a", 3.0}, {"b", 1.0}}, 1.0),
                                 rec("r2", {{"a", 3.0}, {"b", 2.0}}, 2.0)},
                                "c");
  CHECK(flat.normalization().std[0] == 1.0);
  CHECK(flat.normalization().std[1] == doctest::Approx(0.5));

  CHECK_THROWS_AS(build_index({rec("r1", {{"a", 1.0}}, 1.0), rec("r1", {{"a", 2.0}}, 1.0)}, "c"),
                  Error);
  const auto other = make_schema({{"z", FeatureKind::numeric}});
  CHECK_THROWS_AS(build_index({rec("r1", {{"a", 1.0}}, 1.0), rec("r2", {{"z", 2.0}}, 1.0, other)}, "c"),
                  Error);
}

TEST_CASE("normalization means match a direct recomputation") {
  const auto records = eval::synthetic_products(120, 11, 0.1);
  const auto index = build_index(records, "c");
  const auto& schema = index.schema();
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (schema[i].kind != FeatureKind::numeric) continue;
    double s = 0.0, n = 0.0;
    for (const auto& r : records) {
      if (r.features[i]) {
        s += std::get<double>(*r.features[i]);
        n += 1.0;
      }
    }
    CHECK(oracle::close_rel(index.normalization().mean[i], s / n, 1e-12));
  }
}

TEST_CASE("distance") {
  const auto s = four_numeric();
  const Normalization unit{{0, 0, 0, 0}, {1, 1, 1, 1}};
  const auto a = FeatureVector::from_map(s, {{"a", 1.0}, {"b", 2.0}, {"c", 3.0}, {"d", std::string("x")}});
  CHECK(distance(a, a, unit) == 0.0);

  const auto b = FeatureVector::from_map(s, {{"a", 1.0}, {"b", 2.0}, {"c", 3.0}, {"d", std::string("y")}});
  CHECK(distance(a, b, unit) == 1.0);

  const Normalization norm{{0, 0, 0, 0}, {2.0, 4.0, 1.0, 1.0}};
  const auto p = FeatureVector::from_map(s, {{"a", 5.0}, {"b", 1.0}, {"c", 9.0}});
  const auto q = FeatureVector::from_map(s, {{"a", 1.0}, {"b", 9.0}, {"d", std::string("x")}});
  // Shared slots a and b: ((5-1)/2)^2 + ((1-9)/4)^2 = 8, rescaled by sqrt(4/2).
  CHECK(distance(p, q, norm) == doctest::Approx(std::sqrt(8.0) * std::sqrt(2.0)));

  const auto only_c = FeatureVector::from_map(s, {{"c", 1.0}});
  const auto only_a = FeatureVector::from_map(s, {{"a", 1.0}});
  CHECK(std::isinf(distance(only_c, only_a, unit)));
}

TEST_CASE("estimate basics") {
  const auto one = build_index({rec("r1", {{"a", 1.0}, {"b", 2.0}}, 100.0)}, "c");
  const auto q = FeatureVector::from_map(four_numeric(), {{"a", 7.0}});
  const auto e = estimate(one, q);
  CHECK(e.mean() == 100.0);
  CHECK(e.std() == 0.0);
  CHECK(e.method_tag() == std::string(kKnnTag));

  std::vector<IndexedRecord> flat;
  for (int i = 0; i < 5; ++i) flat.push_back(rec("n" + std::to_string(i), {{"a", 1.0 * i}}, 50.0));
  flat.push_back(rec("far", {{"a", 1000.0}}, 900.0));
  const auto e5 = estimate(build_index(flat, "c"), FeatureVector::from_map(four_numeric(), {{"a", 2.0}}));
  CHECK(e5.mean() == 50.0);
  CHECK(e5.std() == 0.0);
  CHECK(e5.neighbors().size() == 5);

  const auto disjoint = FeatureVector::from_map(four_numeric(), {{"d", std::string("x")}});
  CHECK_THROWS_AS(estimate(one, disjoint), Error);
  CHECK_THROWS_AS(estimate(one, q, 0), Error);
}

TEST_CASE("ties are broken by record id") {
  const auto idx = build_index({rec("b", {{"a", 1.0}}, 1.0), rec("a", {{"a", 1.0}}, 3.0),
                                rec("c", {{"a", 1.0}}, 5.0)},
                               "c");
  const auto e = estimate(idx, FeatureVector::from_map(four_numeric(), {{"a", 1.0}}), 2);
  REQUIRE(e.neighbors().size() == 2);
  CHECK(e.neighbors()[0].id == "a");
  CHECK(e.neighbors()[1].id == "b");
}

TEST_CASE("matches brute force on a 200-point index") {
  const auto records = eval::synthetic_products(200, 3, 0.15);
  const auto queries = eval::synthetic_products(50, 4, 0.3);
  check_matches_oracle(records, queries, 5);
  check_matches_oracle(records, queries, 1);
  check_matches_oracle(records, queries, 17);
}

TEST_CASE("weight floor and weights") {
  const auto s = four_numeric();
  const auto index = build_index({rec("sparse", {{"a", 1.0}}, 10.0),
                                  rec("full", {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}, {"d", std::string("x")}}, 20.0)},
                                 "c");
  const auto e = estimate(index, FeatureVector::from_map(s, {{"a", 1.0}}), 2);
  for (const auto& n : e.neighbors()) CHECK(n.weight >= 0.25);
  // Weights 1/4 and 1: mean = (10/4 + 20) / 1.25.
  CHECK(e.mean() == doctest::Approx(18.0));
  CHECK(neighbor_weight(FeatureVector::missing(s)) == 0.25);
}

TEST_CASE("permutation invariance and scaling equivariance") {
  auto records = eval::synthetic_products(150, 8, 0.2);
  const auto queries = eval::synthetic_products(20, 9, 0.2);
  const auto base = build_index(records, "c");

  auto shuffled = records;
  Rng rng(5);
  rng.shuffle(shuffled);
  const auto perm = build_index(shuffled, "c");

  auto scaled = records;
  for (auto& r : scaled) r.target *= 3.5;
  const auto times = build_index(scaled, "c");

  for (const auto& q : queries) {
    const auto e = estimate(base, q.features);
    const auto p = estimate(perm, q.features);
    const auto t = estimate(times, q.features);
    CHECK(p.mean() == doctest::Approx(e.mean()).epsilon(1e-13));
    CHECK(p.std() == doctest::Approx(e.std()).epsilon(1e-13));
    CHECK(t.mean() == doctest::Approx(3.5 * e.mean()).epsilon(1e-13));
    CHECK(t.std() == doctest::Approx(3.5 * e.std()).epsilon(1e-12));
  }
}

TEST_CASE("calibration") {
  const std::vector<double> src = {100, 200, 300};
  CHECK(fit_calibration(src, src).scale == 1.0);
  const std::vector<double> twice = {200, 400, 600};
  CHECK(fit_calibration(src, twice).scale == 2.0);
  const std::vector<double> tgt = {130, 260, 390};
  const auto t = fit_calibration(src, tgt);
  CHECK(t.scale == doctest::Approx(1.3));
  CHECK(t.shift == 0.0);
  const std::vector<double> empty;
  const std::vector<double> zeros = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(fit_calibration(empty, src), Error);
  CHECK_THROWS_AS(fit_calibration(zeros, src), Error);

  const EstimateDistribution e(10.0, 1.0, {{"x", 0.5, 1.0}}, "t");
  CHECK(apply_calibration({}, e) == e);
  const auto s2 = apply_calibration({2.0, 0.0}, e);
  CHECK(s2.mean() == 20.0);
  CHECK(s2.std() == 2.0);
  CHECK(s2.ci95().second == doctest::Approx(20.0 + 1.96 * 2.0));
  CHECK(s2.neighbors() == e.neighbors());

  const CalibrationTransform a{2.0, 0.0}, b{3.0, 0.0};
  CHECK(apply_calibration(b, apply_calibration(a, e)) == apply_calibration({6.0, 0.0}, e));
  CHECK(compose(a, b).scale == 6.0);
  CHECK(median(std::vector<double>{3, 1, 2, 10}) == 2.5);
}

TEST_CASE("add_record equals rebuilding over the union") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = 1 + rng.index(40);
    auto all = eval::synthetic_products(n + 1, 100 + trial, 0.2);
    const auto b = all.back();
    all.pop_back();
    const auto added = add_record(build_index(all, "c"), b);
    all.push_back(b);
    CHECK(added == build_index(all, "c"));
  }

  const auto one = build_index({rec("r1", {{"a", 1.0}}, 5.0)}, "c");
  const auto two = add_record(one, rec("r2", {{"a", 4.0}, {"b", 2.0}}, 9.0));
  CHECK(two.size() == 2);
  const auto e = estimate(two, two.records().back().features, 1);
  CHECK(e.mean() == 9.0);

  const auto other = make_schema({{"z", FeatureKind::numeric}});
  CHECK_THROWS_AS(add_record(one, rec("r3", {{"z", 1.0}}, 1.0, other)), Error);
}

TEST_CASE("index json round trip") {
  const auto index = build_index(eval::synthetic_products(30, 2, 0.2), "demo");
  const auto j = index_to_json(index);
  CHECK(index_from_json(j) == index);
  auto tampered = j;
  tampered["normalization"][0]["mean"] = 12345.0;
  CHECK_THROWS_AS(index_from_json(tampered), Error);
}

TEST_CASE("demo golden estimate") {
  std::ifstream ii(oracle::data_dir() / "demo/index.json");
  std::ifstream qi(oracle::data_dir() / "demo/query.json");
  std::ifstream gi(oracle::data_dir() / "demo/estimate_k5.json");
  const auto index = index_from_json(json::parse(ii));
  const auto query = json::parse(qi).get<FeatureVector>();
  const auto golden = json::parse(gi);
  const auto e = estimate(index, query, 5);
  CHECK(oracle::close_rel(e.mean(), golden["mean"].get<double>(), 1e-12));
  CHECK(oracle::close_rel(e.std(), golden["std"].get<double>(), 1e-12));
  REQUIRE(e.neighbors().size() == golden["neighbors"].size());
  for (std::size_t i = 0; i < e.neighbors().size(); ++i) {
    CHECK(e.neighbors()[i].id == golden["neighbors"][i]["id"].get<std::string>());
    CHECK(oracle::close_rel(e.neighbors()[i].distance, golden["neighbors"][i]["distance"].get<double>(), 1e-12));
    CHECK(e.neighbors()[i].weight == doctest::Approx(golden["neighbors"][i]["weight"].get<double>()));
  }
  CHECK(e.method_tag() == golden["method_tag"].get<std::string>());
}

TEST_CASE("ci95 coverage on Gaussian clusters") {
  constexpr std::size_t kSize = 31;
  const auto records = eval::synthetic_gaussian_clusters(24, kSize, 77);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::vector<IndexedRecord> rest;
    for (std::size_t j = 0; j < records.size(); ++j) {
      if (j != i) rest.push_back(records[j]);
    }
    const auto e = estimate(build_index(std::move(rest), "c"), records[i].features, kSize - 1);
    inside += e.contains(records[i].target) ? 1 : 0;
  }
  CHECK(static_cast<double>(inside) / records.size() >= 0.9);
}

}
