#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "carbonforge/core/error.hpp"
#include "carbonforge/efgen/embedding.hpp"
#include "carbonforge/ingestion/efdb.hpp"
#include "carbonforge/lcia/assess.hpp"
#include "carbonforge/lcia/deviation.hpp"
#include "carbonforge/lcia/matcher.hpp"
#include "carbonforge/util/rng.hpp"
#include "oracles.hpp"

using namespace carbonforge;
using namespace carbonforge::lcia;

namespace {

std::vector<EmissionFactor> components() {
  std::ifstream in(oracle::data_dir() / "efdb/components.jsonl");
  return ingest::parse_efdb(in).records;
}

const DataAbstraction kDa("smartphone",
                          {"PCB", "IC", "sensor", "passive", "mechanical", "battery", "display", "energy"});

/// Entries that quote a database description verbatim, so the factor each
/// one must use is known without running the matcher.
struct RandomLci {
  LifeCycleInventory lci;
  std::vector<double> factor;
};

RandomLci random_lci(const std::vector<EmissionFactor>& db, std::size_t n, Rng& rng) {
  RandomLci out{{"random", kDa, {}, {}}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ef = db[rng.index(db.size())];
    out.lci.entries.push_back({"IC", ef.description, rng.uniform(0.0, 500.0), ef.unit, {}});
    out.lci.provenance.push_back("gen");
    out.factor.push_back(ef.kgco2e_per_unit);
  }
  return out;
}

double multiply_sum(const RandomLci& r) {
  double total = 0.0;
  for (std::size_t i = 0; i < r.factor.size(); ++i) total += r.lci.entries[i].quantity * r.factor[i];
  return total;
}

}  // namespace

TEST_SUITE("lcia") {

TEST_CASE("exact description match") {
  const auto db = components();
  const efgen::HashingEmbedder embedder;
  const InventoryEntry e{"IC", "power management integrated circuit", 2.0, Unit::count, {}};
  const auto m = match_entry(e, db, embedder);
  CHECK_FALSE(m.generate);
  CHECK(m.ef_id == "EF-IC-PMIC");
  CHECK(m.similarity == doctest::Approx(1.0));
}

TEST_CASE("unit gate sends kWh to generation when only grams exist") {
  std::vector<EmissionFactor> grams;
  for (const auto& ef : components()) {
    if (ef.unit == Unit::gram) grams.push_back(ef);
  }
  const efgen::HashingEmbedder embedder;
  const InventoryEntry e{"energy", "electricity, medium voltage, European mix", 10.0, Unit::kWh, {}};
  const auto m = match_entry(e, grams, embedder, kDefaultThreshold, true);
  CHECK(m.generate);
  CHECK(m.ef_id.empty());
  CHECK_THROWS_AS(match_entry(e, grams, embedder, kDefaultThreshold, false), Error);
}

TEST_CASE("8-layer PCB entry prefers the PCB factor") {
  const auto db = components();
  const efgen::HashingEmbedder embedder;
  const InventoryEntry e{"PCB", "8-layer PCB, FR-4 printed circuit board", 7000.0, Unit::mm2, {}};
  const auto m = match_entry(e, db, embedder, 0.0, false);
  CHECK(m.ef_id == "EF-PCB-8L");

  const auto q = embedder.embed(e.description);
  double pcb = 0.0, best_ic = -1.0;
  for (const auto& ef : db) {
    const double c = efgen::cosine(q, embedder.embed(ef.description));
    if (ef.id == "EF-PCB-8L") pcb = c;
    if (ef.id.rfind("EF-IC-", 0) == 0) best_ic = std::max(best_ic, c);
  }
  CHECK(pcb > best_ic);
}

TEST_CASE("assess examples") {
  const auto db = components();
  const LifeCycleInventory empty{"p", kDa, {}, {}};
  CHECK(assess(empty, db).total_kgco2e() == 0.0);

  EmissionFactor three;
  three.id = "X";
  three.description = "widget alloy";
  three.kgco2e_per_unit = 3.0;
  const std::vector<EmissionFactor> one = {three};
  const LifeCycleInventory lci{"p", kDa, {{"mechanical", "widget alloy", 2.0, Unit::gram, {}}}, {"d"}};
  const auto b = assess(lci, one);
  CHECK(b.total_kgco2e() == 6.0);
  CHECK(b.per_entry().at(0).ef_id == "X");

  const LifeCycleInventory invalid{"p", kDa, {{"textile", "strap", 1.0, Unit::count, {}}}, {"d"}};
  CHECK_THROWS_AS(assess(invalid, db), Error);
}

TEST_CASE("25-entry randomized inventory equals the multiply-sum") {
  const auto db = components();
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = random_lci(db, 25, rng);
    CHECK(oracle::close_rel(assess(r.lci, db).total_kgco2e(), multiply_sum(r), 1e-9));
  }
}

TEST_CASE("unmatched entries: error without fallback, generated with it") {
  const auto db = components();
  const LifeCycleInventory lci{
      "p", kDa, {{"mechanical", "zzqx unobtainium lattice", 40.0, Unit::gram, {}}}, {"d"}};
  CHECK_THROWS_AS(assess(lci, db), Error);
  AssessOptions opts;
  opts.fallback = true;
  const auto a = assess_detailed(lci, db, opts);
  REQUIRE(a.generated.count(0));
  CHECK(a.breakdown.per_entry().at(0).ef_id == kGeneratedEf);
  CHECK(a.breakdown.total_kgco2e() == doctest::Approx(40.0 * a.generated.at(0).mean()));
  CHECK(a.breakdown.total_std() > 0.0);
}

TEST_CASE("render_table lists every entry and the total") {
  const auto db = components();
  Rng rng(1);
  const auto r = random_lci(db, 4, rng);
  const auto b = assess(r.lci, db);
  const auto text = render_table(r.lci, b);
  for (const auto& e : r.lci.entries) CHECK(text.find(e.description.substr(0, 12)) != std::string::npos);
  CHECK(text.find("total") != std::string::npos);
}

TEST_CASE("compare_to_reported") {
  const CFBreakdown b({{0, "IC", "a", 80.0, 0.0}, {1, "PCB", "b", 40.0, 0.0}});
  ProductRecord rec;
  rec.name = "p";
  rec.reported_cf_kgco2e = 100.0;
  const auto d = compare_to_reported(b, rec);
  CHECK(d.ape == doctest::Approx(20.0));
  CHECK(d.signed_error == doctest::Approx(20.0));
  REQUIRE(d.ranked_classes.size() == 2);
  CHECK(d.ranked_classes[0].first == "IC");

  rec.reported_cf_kgco2e = 120.0;
  CHECK(compare_to_reported(b, rec).ape == 0.0);
}

TEST_CASE("fleet ranking follows hand-computed APEs") {
  Rng rng(10);
  std::vector<DeviationReport> fleet;
  std::vector<std::pair<double, std::string>> expected;
  for (int i = 0; i < 10; ++i) {
    const double est = rng.uniform(50.0, 150.0);
    const double rep = rng.uniform(50.0, 150.0);
    ProductRecord rec;
    rec.name = "product-" + std::to_string(i);
    rec.reported_cf_kgco2e = rep;
    fleet.push_back(compare_to_reported(CFBreakdown({{0, "IC", "x", est, 0.0}}), rec));
    expected.emplace_back(-std::abs(est - rep) / rep, rec.name);
  }
  std::sort(expected.begin(), expected.end());
  const auto ranked = rank_fleet(fleet);
  for (std::size_t i = 0; i < ranked.size(); ++i) CHECK(ranked[i].product == expected[i].second);
}

}
