// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>

#include "carbonforge/agent/scaling.hpp"
#include "carbonforge/agent/selfplay.hpp"
#include "carbonforge/efgen/benchmark.hpp"
#include "carbonforge/efgen/embedding.hpp"
#include "carbonforge/efgen/grid_ef.hpp"
#include "carbonforge/efgen/material_ef.hpp"
#include "carbonforge/eval/experiments.hpp"
#include "carbonforge/eval/lci_metrics.hpp"
#include "carbonforge/eval/metrics.hpp"
#include "carbonforge/eval/synthetic.hpp"
#include "carbonforge/ingestion/efdb.hpp"
#include "carbonforge/knn/estimator.hpp"
#include "carbonforge/lcia/assess.hpp"
#include "carbonforge/util/rng.hpp"
#include "carbonforge/vision/board.hpp"
#include "carbonforge/vision/detector.hpp"
#include "carbonforge/vision/hpf.hpp"
#include "oracles.hpp"

using namespace carbonforge;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Outcome knn_oracle_equivalence() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto records = eval::synthetic_products(500, 101, 0.15);
  const auto queries = eval::synthetic_products(100, 202, 0.15);
  const auto index = knn::build_index(records, "acceptance");
  std::size_t id_mismatch = 0, value_mismatch = 0;
  for (const auto& q : queries) {
    const auto got = knn::estimate(index, q.features, 5);
    const auto want = oracle::brute_force_knn(records, q.features, 5);
    std::vector<std::string> ids;
    for (const auto& n : got.neighbors()) ids.push_back(n.id);
    if (ids != want.ids) ++id_mismatch;
    if (!oracle::close_rel(got.mean(), want.mean, 1e-12) || !oracle::close_rel(got.std(), want.std, 1e-12)) {
      ++value_mismatch;
    }
  }
  const double ms = ms_since(t0);
  o.require(id_mismatch == 0, std::to_string(id_mismatch) + " neighbour sets differ");
  o.require(value_mismatch == 0, std::to_string(value_mismatch) + " mean/std differ");
  o.require(ms < 5000.0, "took " + fmt(ms) + " ms");
  o.detail = o.pass ? "100 queries agree, " + fmt(ms) + " ms" : o.detail;
  return o;
}

Outcome query_scaling() {
  Outcome o;
  const auto queries = eval::synthetic_products(41, 9);
  std::vector<double> ns, medians;
  double single_1k = 0.0;
  for (std::size_t n : {1000u, 2000u, 4000u}) {
    const auto index = knn::build_index(eval::synthetic_products(n, 17 + n), "scaling");
    knn::estimate(index, queries[0].features, 5);
    std::vector<double> times;
    for (const auto& q : queries) {
      const auto t0 = Clock::now();
      knn::estimate(index, q.features, 5);
      times.push_back(ms_since(t0));
    }
    if (n == 1000) single_1k = *std::max_element(times.begin(), times.end());
    std::nth_element(times.begin(), times.begin() + times.size() / 2, times.end());
    ns.push_back(static_cast<double>(n));
    medians.push_back(times[times.size() / 2]);
  }
  const double fit = oracle::linear_fit_r2(ns, medians);
  o.require(fit >= 0.95, "linear R2 " + fmt(fit));
  o.require(single_1k < 10.0, "slowest query at n=1k " + fmt(single_1k) + " ms");
  if (o.pass) {
    o.detail = "medians " + fmt(medians[0]) + "/" + fmt(medians[1]) + "/" + fmt(medians[2]) + " ms, R2 " + fmt(fit);
  }
  return o;
}

Outcome grid_recovery() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto records = eval::grid_records_to_dataset(eval::synthetic_grid_world(348, 348));
  const auto split = eval::holdout_split(records, 0.2, 7);
  const auto res = eval::evaluate_holdout(split.train, split.test, efgen::kGridDefaults);
  std::vector<double> pred, truth;
  for (const auto& p : res.predictions) {
    pred.push_back(p.mean);
    truth.push_back(p.truth);
  }
  const double r2 = oracle::r_squared(pred, truth);
  const double mape = oracle::mape_percent(pred, truth);
  o.require(res.failures.empty(), std::to_string(res.failures.size()) + " failures");
  o.require(r2 >= 0.85, "R2 " + fmt(r2));
  o.require(mape <= 10.0, "MAPE " + fmt(mape));

  const std::vector<std::size_t> sizes = {30, 60, 120, 240};
  const auto curve = eval::scaling_sweep(split.train, split.test, sizes, 10, 7, efgen::kGridDefaults);
  std::string means;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    means += (i ? "/" : "") + fmt(curve.points[i].summary.mean);
    if (i == 0) continue;
    const auto& prev = curve.points[i - 1].summary;
    o.require(curve.points[i].summary.mean <= prev.mean + prev.sd,
              "curve rises at size " + std::to_string(sizes[i]));
  }
  const double ms = ms_since(t0);
  o.require(ms < 10000.0, "took " + fmt(ms) + " ms");
  if (o.pass) o.detail = "R2 " + fmt(r2) + ", MAPE " + fmt(mape) + "%, curve " + means + ", " + fmt(ms) + " ms";
  return o;
}

Outcome masking_robustness() {
  Outcome o;
  const auto records = eval::grid_records_to_dataset(eval::synthetic_grid_world(348, 348));
  const std::vector<double> fractions = {0.0, 0.5};
  const auto report = eval::masking_sweep(records, fractions, 5, 13, efgen::kGridDefaults);
  const auto& base = report.points[0];
  const auto& half = report.points[1];
  o.require(half.failures == 0, std::to_string(half.failures) + " failures at 50%");
  const double ratio = half.summary.mean / base.summary.mean;
  o.require(std::isfinite(ratio) && ratio <= 2.5, "ratio " + fmt(ratio));
  if (o.pass) {
    o.detail = "MAPE " + fmt(base.summary.mean) + "% -> " + fmt(half.summary.mean) + "%, ratio " + fmt(ratio);
  }
  return o;
}

Outcome material_ordering() {
  Outcome o;
  std::ifstream in(oracle::data_dir() / "efdb/materials_90.jsonl");
  const auto efs = ingest::parse_efdb(in).records;
  const efgen::HashingEmbedder embedder;
  std::vector<efgen::MaterialEntry> pool;
  for (const auto& f : efs) pool.push_back(efgen::make_material_entry(f, embedder));
  o.require(pool.size() == 90, "fixture has " + std::to_string(pool.size()) + " entries");
  using efgen::MaterialMode;
  const auto text = efgen::run_masked_benchmark(pool, pool.size(), 5, MaterialMode::text_only, 1);
  const auto both = efgen::run_masked_benchmark(pool, pool.size(), 5, MaterialMode::text_plus_domain, 1);
  o.require(both.mape < text.mape, "text+domain " + fmt(both.mape) + " >= text " + fmt(text.mape));
  const auto text2 = efgen::run_masked_benchmark(pool, pool.size(), 5, MaterialMode::text_only, 1);
  const auto both2 = efgen::run_masked_benchmark(pool, pool.size(), 5, MaterialMode::text_plus_domain, 1);
  o.require(efgen::to_json(text) == efgen::to_json(text2) && efgen::to_json(both) == efgen::to_json(both2),
            "runs not deterministic");
  if (o.pass) o.detail = "text_only " + fmt(text.mape) + "%, text_plus_domain " + fmt(both.mape) + "%";
  return o;
}

Outcome lcia_exactness() {
  Outcome o;
  std::ifstream in(oracle::data_dir() / "efdb/components.jsonl");
  const auto db = ingest::parse_efdb(in).records;
  const DataAbstraction da("smartphone", {"PCB", "IC", "sensor", "passive", "mechanical"});
  Rng rng(6);

  struct Case {
    LifeCycleInventory lci;
    std::vector<double> factor;
  };
  auto make = [&](std::size_t n) {
    Case c{{"random", da, {}, {}}, {}};
    for (std::size_t i = 0; i < n; ++i) {
      const auto& ef = db[rng.index(db.size())];
      c.lci.entries.push_back({"IC", ef.description, rng.uniform(0.0, 500.0), ef.unit, {}});
      c.lci.provenance.push_back("gen");
      c.factor.push_back(ef.kgco2e_per_unit);
    }
    return c;
  };

  std::size_t exact_fail = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto c = make(1 + rng.index(25));
    double want = 0.0;
    for (std::size_t j = 0; j < c.factor.size(); ++j) want += c.lci.entries[j].quantity * c.factor[j];
    if (!oracle::close_rel(lcia::assess(c.lci, db).total_kgco2e(), want, 1e-9)) ++exact_fail;
  }
  o.require(exact_fail == 0, std::to_string(exact_fail) + " of 1000 totals differ");

  // Property cases: scaling, additivity over a split, and a quantity bump.
  std::size_t linear_fail = 0, mono_fail = 0;
  for (int i = 0; i < 10000; ++i) {
    auto c = make(2 + rng.index(4));
    const double total = lcia::assess(c.lci, db).total_kgco2e();
    const double s = rng.uniform(0.1, 10.0);
    auto scaled = c.lci;
    for (auto& e : scaled.entries) e.quantity *= s;
    if (!oracle::close_rel(lcia::assess(scaled, db).total_kgco2e(), s * total, 1e-9)) ++linear_fail;

    auto head = c.lci;
    head.entries.resize(1);
    head.provenance.resize(1);
    auto tail = c.lci;
    tail.entries.erase(tail.entries.begin());
    tail.provenance.erase(tail.provenance.begin());
    const double parts = lcia::assess(head, db).total_kgco2e() + lcia::assess(tail, db).total_kgco2e();
    if (!oracle::close_rel(parts, total, 1e-9)) ++linear_fail;

    auto bumped = c.lci;
    bumped.entries[rng.index(bumped.entries.size())].quantity += rng.uniform(0.0, 100.0);
    if (lcia::assess(bumped, db).total_kgco2e() < total) ++mono_fail;
  }
  o.require(linear_fail == 0, std::to_string(linear_fail) + " linearity failures");
  o.require(mono_fail == 0, std::to_string(mono_fail) + " monotonicity failures");
  if (o.pass) o.detail = "1000 totals exact, 10000 property cases hold";
  return o;
}

cv::Mat checkerboard(int side, int block) {
  cv::Mat m(side, side, CV_8U);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) m.at<uchar>(y, x) = ((x / block + y / block) % 2) ? 255 : 0;
  }
  return m;
}

Outcome vision_checks() {
  Outcome o;
  using namespace vision;
  const auto img = [](const char* name) { return image_from_file(oracle::data_dir() / "images" / name, name); };
  const double flat = hpf_score(cv::Mat(512, 512, CV_8U, cv::Scalar(128)));
  const double coarse = hpf_score(checkerboard(512, 64));
  const double fine = hpf_score(checkerboard(512, 2));
  o.require(flat < coarse && coarse < fine, "synthetic ordering " + fmt(flat) + "/" + fmt(coarse) + "/" + fmt(fine));
  const double ff = hpf_score(img("flat_panel.png"));
  const double fc = hpf_score(img("checker_coarse.png"));
  const double fn = hpf_score(img("checker_fine.png"));
  o.require(ff < fc && fc < fn, "fixture ordering " + fmt(ff) + "/" + fmt(fc) + "/" + fmt(fn));

  cv::Mat base;
  cv::min(decode_gray(img("board_full.png")), 195, base);
  cv::max(base, 60, base);
  cv::Mat shifted;
  base.convertTo(shifted, CV_8U, 1.0, 50.0);
  const double a = hpf_score(base), b = hpf_score(shifted);
  o.require(oracle::close_rel(a, b, 1e-6), "brightness shift changes score by " + fmt(std::abs(a - b) / a));

  std::ifstream meta(oracle::data_dir() / "images/calibration_board.json");
  const auto truth = json::parse(meta);
  const auto board = img("calibration_board.png");
  BlobDetector det;
  const auto found = det.detect(board);
  const auto* ref = find_reference(found, truth["reference"]["label"].get<std::string>());
  if (ref == nullptr) {
    o.require(false, "reference component not found");
  } else {
    const auto cal = calibrate_scale(truth["reference"]["known_w_mm"].get<double>(),
                                     truth["reference"]["known_h_mm"].get<double>(), ref->bbox);
    const auto dims = board_dimensions(find_board_bbox(decode_gray(board)), cal);
    const double w = truth["board_w_mm"].get<double>(), h = truth["board_h_mm"].get<double>();
    o.require(std::abs(dims.w_mm - w) / w <= 0.02 && std::abs(dims.h_mm - h) / h <= 0.02,
              "rendered board " + fmt(dims.w_mm) + " x " + fmt(dims.h_mm) + " mm");
  }

  const auto fp = board_dimensions({0, 0, 1530, 670}, calibrate_scale(10.0, 10.0, {0, 0, 100, 100}));
  o.require(std::abs(fp.w_mm - 153.0) < 1e-9 && std::abs(fp.h_mm - 67.0) < 1e-9,
            "example board " + fmt(fp.w_mm) + " x " + fmt(fp.h_mm));

  const auto dense = decode_gray(img("dense_texture.png"));
  hpf_score(dense);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const auto t0 = Clock::now();
    hpf_score(dense);
    worst = std::max(worst, ms_since(t0));
  }
  o.require(worst < 100.0, "scoring took " + fmt(worst) + " ms");
  if (o.pass) o.detail = "ordering, shift invariance, calibration hold; scoring " + fmt(worst) + " ms";
  return o;
}

Outcome agent_determinism(const agent::Suite& suite) {
  using namespace agent;
  Outcome o;
  FixtureBackend backend(suite.corpus);
  std::size_t differ = 0;
  for (const auto& c : suite.cases) {
    const auto first = to_json(run_selfplay(c.query, {}, backend).transcript);
    for (int i = 1; i < 5; ++i) {
      if (to_json(run_selfplay(c.query, {}, backend).transcript) != first) ++differ;
    }
  }
  o.require(differ == 0, std::to_string(differ) + " repeated runs differ");

  Rng rng(88);
  std::size_t over = 0, invalid = 0;
  for (int i = 0; i < 200; ++i) {
    const Budget b{static_cast<long>(1000 + rng.index(40000)), static_cast<int>(1 + rng.index(8)),
                   static_cast<int>(1 + rng.index(20))};
    const auto& c = suite.cases[rng.index(suite.cases.size())];
    const auto r = run_selfplay(c.query, b, backend);
    const auto& t = r.transcript;
    if (t.rounds.size() > static_cast<std::size_t>(b.max_rounds) ||
        t.documents_read > static_cast<std::size_t>(b.max_documents) ||
        t.elapsed_ms > static_cast<double>(b.max_thinking_ms) + t.grace_ms) {
      ++over;
    }
    if (!validate_inventory(r.lci).empty()) ++invalid;
  }
  o.require(over == 0, std::to_string(over) + " of 200 runs exceed their budget");
  o.require(invalid == 0, std::to_string(invalid) + " invalid inventories");
  if (o.pass) o.detail = "5x" + std::to_string(suite.cases.size()) + " identical transcripts, 200 budgets respected";
  return o;
}

Outcome scaling_trends(const agent::Suite& suite) {
  using namespace agent;
  Outcome o;
  const std::vector<int> rounds = {1, 2, 4, 8};
  const auto r = measure_scaling(suite, rounds_grid(rounds, {}));
  std::string f1s, apes;
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    f1s += (i ? "/" : "") + fmt(r.cells[i].f1.mean);
    apes += (i ? "/" : "") + fmt(r.cells[i].ape.mean);
    if (i == 0) continue;
    o.require(r.cells[i].f1.mean >= r.cells[i - 1].f1.mean, "F1 drops at rounds=" + std::to_string(rounds[i]));
    o.require(r.cells[i].ape.mean <= r.cells[i - 1].ape.mean, "APE rises at rounds=" + std::to_string(rounds[i]));
  }
  const std::vector<long> ms = {5000, 10000, 20000, 40000, 80000};
  const auto t = measure_scaling(suite, thinking_grid(ms, {}));
  for (std::size_t i = 1; i < t.cells.size(); ++i) {
    o.require(t.cells[i].tokens_used.mean >= t.cells[i - 1].tokens_used.mean,
              "tokens drop at " + std::to_string(ms[i]) + " ms");
  }
  if (o.pass) o.detail = "F1 " + f1s + ", APE " + apes;
  return o;
}

Outcome metric_goldens() {
  Outcome o;
  const DataAbstraction da("smartphone", {"PCB", "IC", "sensor"});
  auto lci = [&](std::vector<std::pair<const char*, double>> items) {
    LifeCycleInventory l{"p", da, {}, {}};
    for (const auto& [cls, q] : items) {
      l.entries.push_back({cls, "", q, Unit::count, {}});
      l.provenance.push_back("d");
    }
    return l;
  };
  const double jsd = eval::lci_jsd(lci({{"IC", 1}, {"PCB", 1}}), lci({{"IC", 1}}));
  const double jsd_oracle = oracle::jsd_bits({0.5, 0.5}, {1.0, 0.0});
  o.require(std::abs(jsd - 0.3113) <= 1e-4 && std::abs(jsd - jsd_oracle) < 1e-12, "JSD " + fmt(jsd));
  const double f1 = eval::lci_f1(lci({{"IC", 1}, {"IC", 1}, {"IC", 1}, {"PCB", 1}}),
                                 lci({{"IC", 1}, {"IC", 1}, {"PCB", 1}, {"sensor", 1}}));
  o.require(std::abs(f1 - 0.75) < 1e-12, "F1 " + fmt(f1));
  const std::vector<double> p = {120.0}, t = {100.0};
  const double m = eval::mape(p, t);
  o.require(std::abs(m - 20.0) < 1e-12 && std::abs(m - oracle::mape_percent(p, t)) < 1e-12, "MAPE " + fmt(m));
  if (o.pass) o.detail = "JSD " + fmt(jsd) + ", F1 " + fmt(f1) + ", MAPE " + fmt(m);
  return o;
}

}  // namespace

int main() {
  const auto suite = agent::load_suite(oracle::data_dir() / "suite");
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"kNN oracle equivalence", knn_oracle_equivalence},
      {"O(n) query scaling", query_scaling},
      {"synthetic grid recovery", grid_recovery},
      {"masking robustness", masking_robustness},
      {"material EF leave-one-out ordering", material_ordering},
      {"LCIA exactness", lcia_exactness},
      {"vision ordering and calibration", vision_checks},
      {"agent determinism and budgets", [&] { return agent_determinism(suite); }},
      {"scaling sweep trends", [&] { return scaling_trends(suite); }},
      {"metric golden values", metric_goldens},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("%-4s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
