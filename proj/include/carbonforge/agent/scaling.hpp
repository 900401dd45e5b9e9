#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "carbonforge/agent/selfplay.hpp"
#include "carbonforge/core/inventory.hpp"
#include "carbonforge/core/json.hpp"
#include "carbonforge/core/records.hpp"
#include "carbonforge/eval/metrics.hpp"
#include "carbonforge/ingestion/corpus.hpp"

namespace carbonforge::agent {

struct SuiteCase {
  std::string query;
  LifeCycleInventory reference;
  double reference_co2e = 0.0;
};

struct Suite {
  std::vector<SuiteCase> cases;
  ingest::Corpus corpus;
  std::vector<EmissionFactor> efdb;
};

/// Reads suite.json from `dir`: {"corpus": <dir>, "efdb": <jsonl>,
/// "cases": [{"query", "reference", "reference_co2e"}]}. Paths are relative
/// to `dir`.
Suite load_suite(const std::filesystem::path& dir);

struct BudgetPoint {
  std::string label;
  Budget budget;
};

/// Sweeps one budget dimension while the others stay at `base`.
std::vector<BudgetPoint> rounds_grid(std::span<const int> rounds, const Budget& base);
std::vector<BudgetPoint> thinking_grid(std::span<const long> thinking_ms, const Budget& base);
std::vector<BudgetPoint> documents_grid(std::span<const int> documents, const Budget& base);

struct CaseOutcome {
  std::string query;
  double ape = 0.0;
  double l1 = 0.0;
  double f1 = 0.0;
  double jsd = 0.0;
  double co2e = 0.0;
  std::size_t tokens_used = 0;
  std::size_t documents_read = 0;
  std::size_t reasoning_steps = 0;
  double elapsed_ms = 0.0;
  std::string stop_reason;
};

struct ScalingCell {
  BudgetPoint point;
  std::vector<CaseOutcome> cases;
  eval::MeanSd ape, l1, f1, jsd, tokens_used, documents_read, reasoning_steps;
};

struct ScalingReport {
  std::vector<ScalingCell> cells;
};

/// Runs every case at every budget point. Runs are independent and execute
/// on `threads` workers (0 = hardware concurrency); results are merged in
/// (point, case) order.
ScalingReport measure_scaling(const Suite& suite, std::span<const BudgetPoint> grid,
                              QueryBackend& backend, const SelfPlayOptions& options = {},
                              unsigned threads = 0);
/// Same over a FixtureBackend on the suite's corpus.
ScalingReport measure_scaling(const Suite& suite, std::span<const BudgetPoint> grid,
                              const SelfPlayOptions& options = {}, unsigned threads = 0);

/// Scores one finished run against its reference. A prediction with no
/// quantity gets JSD 1.
CaseOutcome score_case(const SuiteCase& c, const SelfPlayResult& run,
                       std::span<const EmissionFactor> efdb);

json to_json(const ScalingReport& r);
/// One row per (point, case).
void write_csv(std::ostream& out, const ScalingReport& r);

}  // namespace carbonforge::agent
