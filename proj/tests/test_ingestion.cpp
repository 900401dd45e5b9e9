#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "carbonforge/core/error.hpp"
#include "carbonforge/core/json.hpp"
#include "carbonforge/ingestion/corpus.hpp"
#include "carbonforge/ingestion/efdb.hpp"
#include "carbonforge/ingestion/grid.hpp"
#include "carbonforge/ingestion/pcf.hpp"
#include "oracles.hpp"

using namespace carbonforge;
using namespace carbonforge::ingest;

namespace {

std::ifstream open(const std::string& rel) {
  std::ifstream in(oracle::data_dir() / rel);
  REQUIRE(in.good());
  return in;
}

const char* kGridHeader =
    "region,date,carbon_intensity_g_per_kwh,nuclear,wind,hydro,solar,coal,gas,oil,biomass,"
    "geothermal,battery_discharge,unknown\n";

}  // namespace

TEST_SUITE("ingestion") {

TEST_CASE("pcf fixture: one malformed row out of twelve") {
  auto in = open("pcf/dell_laptops.csv");
  const auto r = parse_pcf_records(in);
  CHECK(r.records.size() == 11);
  REQUIRE(r.rejected.size() == 1);
  CHECK(r.rejected[0].message.find("reported_cf_kgco2e") != std::string::npos);

  const auto xps = std::find_if(r.records.begin(), r.records.end(),
                                [](const auto& p) { return p.name == "XPS 17"; });
  REQUIRE(xps != r.records.end());
  CHECK(xps->reported_cf_kgco2e == 450.0);
  CHECK(xps->company == "Dell");
  CHECK(xps->category == ProductCategory::laptop);
}

TEST_CASE("pcf round trip through the writer") {
  auto in = open("pcf/dell_laptops.csv");
  const auto first = parse_pcf_records(in);
  std::stringstream ss;
  write_pcf_records(ss, first.records);
  const auto second = parse_pcf_records(ss);
  CHECK(second.rejected.empty());
  CHECK(second.records == first.records);
}

TEST_CASE("pcf header problems throw") {
  std::istringstream bad("company,category\nDell,laptop\n");
  CHECK_THROWS_AS(parse_pcf_records(bad), Error);
}

TEST_CASE("dedup_similar") {
  const auto schema = make_schema({{"x", FeatureKind::numeric}});
  ProductRecord a{"Co", ProductCategory::laptop, "A", FeatureVector::from_map(schema, {{"x", 1.0}}), 10.0, {}, {}};
  auto b = a;
  b.name = "B";
  auto c = a;
  c.name = "C";
  c.features = FeatureVector::from_map(schema, {{"x", 2.0}});

  const std::vector<ProductRecord> dupes = {b, a};
  const auto r = dedup_similar(dupes);
  REQUIRE(r.kept.size() == 1);
  CHECK(r.kept[0].name == "A");
  REQUIRE(r.excluded.size() == 1);
  CHECK(r.excluded[0].name == "B");

  const std::vector<ProductRecord> distinct = {a, c};
  CHECK(dedup_similar(distinct).excluded.empty());
}

TEST_CASE("dedup fixture keeps seventeen of twenty") {
  auto in = open("pcf/dedup_laptops.csv");
  const auto parsed = parse_pcf_records(in);
  REQUIRE(parsed.records.size() == 20);
  const auto r = dedup_similar(parsed.records);
  CHECK(r.kept.size() == 17);
  CHECK(r.excluded.size() == 3);
  std::set<std::string> kept;
  for (const auto& p : r.kept) kept.insert(p.name);
  CHECK(kept.count("ThinkPad T14"));
  CHECK(kept.count("ThinkPad T17"));
  CHECK(kept.count("ThinkPad T23"));
}

TEST_CASE("grid rows") {
  std::istringstream ok(std::string(kGridHeader) + "NO,2024-01-01,24,0,0,1.0,0,0,0,0,0,0,0,0\n");
  const auto r = parse_grid_records(ok);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].carbon_intensity_g_per_kwh == 24.0);
  CHECK(std::get<double>(*r.records[0].source_shares.at("hydro")) == 1.0);

  std::istringstream over(std::string(kGridHeader) + "NO,2024-01-01,24,0.2,0,1.0,0,0,0,0,0,0,0,0\n");
  const auto r2 = parse_grid_records(over);
  CHECK(r2.records.empty());
  CHECK(r2.rejected.size() == 1);

  std::istringstream bad_date(std::string(kGridHeader) + "NO,2024-13-01,24,0,0,1.0,0,0,0,0,0,0,0,0\n");
  CHECK(parse_grid_records(bad_date).rejected.size() == 1);
}

TEST_CASE("grid fixture: 348 regions") {
  auto in = open("grid/regions_2024.csv");
  const auto r = parse_grid_records(in);
  CHECK(r.rejected.empty());
  CHECK(r.records.size() == 348);
  std::set<std::string> regions;
  for (const auto& g : r.records) regions.insert(g.region);
  CHECK(regions.size() == 348);
}

TEST_CASE("annual mean intensity") {
  CHECK(annual_mean_intensity(std::map<std::string, std::vector<double>>{{"A", {100, 100}}}).at("A") == 100.0);
  CHECK(annual_mean_intensity(std::map<std::string, std::vector<double>>{{"A", {90, 110}}}).at("A") == 100.0);
  CHECK_THROWS_AS(annual_mean_intensity(std::map<std::string, std::vector<double>>{{"A", {}}}), Error);

  auto in = open("grid/daily_jan_2024.csv");
  const auto r = parse_grid_records(in);
  REQUIRE(r.rejected.empty());
  const auto means = annual_mean_intensity(r.records);
  std::ifstream oj(oracle::data_dir() / "grid/daily_jan_2024_means.json");
  const auto expected = json::parse(oj);
  REQUIRE(means.size() == expected.size());
  for (const auto& [region, value] : expected.items()) {
    CHECK(oracle::close_rel(means.at(region), value.get<double>(), 1e-12));
  }
}

TEST_CASE("grid write then parse is lossless") {
  auto in = open("grid/regions_2024.csv");
  const auto r = parse_grid_records(in);
  std::stringstream ss;
  write_grid_records(ss, r.records);
  CHECK(parse_grid_records(ss).records == r.records);
}

TEST_CASE("efdb") {
  auto in = open("efdb/materials_90.jsonl");
  const auto r = parse_efdb(in);
  CHECK(r.rejected.empty());
  CHECK(r.records.size() == 90);

  std::istringstream mixed(
      R"({"id":"A","unit":"gram","kgco2e_per_unit":1.0})" "\n"
      R"({"id":"B","unit":"gram","kgco2e_per_unit":-1.0})" "\n"
      "not json\n"
      R"({"id":"A","unit":"gram","kgco2e_per_unit":2.0})" "\n");
  const auto m = parse_efdb(mixed);
  CHECK(m.records.size() == 1);
  CHECK(m.rejected.size() == 3);

  std::stringstream ss;
  write_efdb(ss, r.records);
  CHECK(parse_efdb(ss).records == r.records);
}

TEST_CASE("corpus loading") {
  const auto corpus = Corpus::load(oracle::data_dir() / "image_corpus");
  const auto& imgs = corpus.lookup("Board Phone X|IC");
  CHECK(imgs.size() == 3);
  for (const auto& id : imgs) {
    const auto& d = corpus.get(id);
    CHECK(d.modality == Modality::image);
    CHECK_FALSE(d.payload.empty());
    REQUIRE(d.reference.has_value());
    CHECK(d.reference->known_w_mm == 14.0);
  }
  CHECK(corpus.lookup("nothing here").empty());
  CHECK(corpus.find("missing") == nullptr);
  CHECK_THROWS_AS(corpus.get("missing"), Error);
  CHECK_THROWS_AS(Corpus({}, {{"k", {"ghost"}}}), Error);
}

}
