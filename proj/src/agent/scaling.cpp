#include "carbonforge/agent/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <thread>

#include "carbonforge/core/error.hpp"
#include "carbonforge/eval/lci_metrics.hpp"
#include "carbonforge/ingestion/efdb.hpp"
#include "carbonforge/lcia/assess.hpp"
#include "carbonforge/util/csv.hpp"

namespace carbonforge::agent {

namespace {

double total_quantity(const LifeCycleInventory& lci) {
  double q = 0.0;
  for (const auto& e : lci.entries) q += e.quantity;
  return q;
}

template <typename F>
eval::MeanSd summarize(const std::vector<CaseOutcome>& cases, F field) {
  std::vector<double> xs;
  for (const auto& c : cases) xs.push_back(static_cast<double>(field(c)));
  return eval::mean_sd(xs);
}

json mean_sd_json(const eval::MeanSd& m) { return json{{"mean", m.mean}, {"sd", m.sd}}; }

}  // namespace

Suite load_suite(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "suite.json";
  std::ifstream in(manifest_path);
  if (!in) throw_data_error("cannot open " + manifest_path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto manifest = parse_json_text(text, manifest_path.string());

  Suite suite;
  try {
    suite.corpus = ingest::Corpus::load(dir / manifest.at("corpus").get<std::string>());
    const auto efdb_path = dir / manifest.at("efdb").get<std::string>();
    std::ifstream efdb(efdb_path);
    if (!efdb) throw_data_error("cannot open " + efdb_path.string());
    auto parsed = ingest::parse_efdb(efdb);
    if (!parsed.rejected.empty()) {
      throw_data_error(efdb_path.string() + " line " + std::to_string(parsed.rejected[0].line) +
                       ": " + parsed.rejected[0].message);
    }
    suite.efdb = std::move(parsed.records);
    for (const auto& c : manifest.at("cases")) {
      SuiteCase sc{c.at("query").get<std::string>(), c.at("reference").get<LifeCycleInventory>(),
                   c.at("reference_co2e").get<double>()};
      if (!(sc.reference_co2e > 0.0)) throw_data_error("reference_co2e must be positive");
      suite.cases.push_back(std::move(sc));
    }
  } catch (const json::exception& e) {
    throw_data_error(manifest_path.string() + ": " + e.what());
  }
  if (suite.cases.empty()) throw_data_error("suite has no cases");
  return suite;
}

std::vector<BudgetPoint> rounds_grid(std::span<const int> rounds, const Budget& base) {
  std::vector<BudgetPoint> out;
  for (int r : rounds) {
    Budget b = base;
    b.max_rounds = r;
    out.push_back({"rounds=" + std::to_string(r), b});
  }
  return out;
}

std::vector<BudgetPoint> thinking_grid(std::span<const long> thinking_ms, const Budget& base) {
  std::vector<BudgetPoint> out;
  for (long ms : thinking_ms) {
    Budget b = base;
    b.max_thinking_ms = ms;
    out.push_back({"thinking_ms=" + std::to_string(ms), b});
  }
  return out;
}

std::vector<BudgetPoint> documents_grid(std::span<const int> documents, const Budget& base) {
  std::vector<BudgetPoint> out;
  for (int d : documents) {
    Budget b = base;
    b.max_documents = d;
    out.push_back({"documents=" + std::to_string(d), b});
  }
  return out;
}

CaseOutcome score_case(const SuiteCase& c, const SelfPlayResult& run,
                       std::span<const EmissionFactor> efdb) {
  CaseOutcome o;
  o.query = c.query;
  lcia::AssessOptions opts;
  opts.fallback = true;
  o.co2e = lcia::assess(run.lci, efdb, opts).total_kgco2e();
  o.ape = std::abs(o.co2e - c.reference_co2e) / c.reference_co2e * 100.0;
  o.l1 = eval::lci_l1(run.lci, c.reference);
  o.f1 = eval::lci_f1(run.lci, c.reference);
  o.jsd = total_quantity(run.lci) > 0.0 ? eval::lci_jsd(run.lci, c.reference) : 1.0;
  const auto& t = run.transcript;
  o.tokens_used = t.tokens_used;
  o.documents_read = t.documents_read;
  o.reasoning_steps = t.reasoning_steps;
  o.elapsed_ms = t.elapsed_ms;
  o.stop_reason = std::string(to_string(t.stop_reason));
  return o;
}

ScalingReport measure_scaling(const Suite& suite, std::span<const BudgetPoint> grid,
                              QueryBackend& backend, const SelfPlayOptions& options,
                              unsigned threads) {
  const std::size_t n_cases = suite.cases.size();
  const std::size_t n_jobs = grid.size() * n_cases;
  std::vector<CaseOutcome> outcomes(n_jobs);
  std::vector<std::exception_ptr> errors(n_jobs);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t job = next++; job < n_jobs; job = next++) {
      const auto& point = grid[job / n_cases];
      const auto& sc = suite.cases[job % n_cases];
      try {
        const auto run = run_selfplay(sc.query, point.budget, backend, options);
        outcomes[job] = score_case(sc, run, suite.efdb);
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n_jobs, 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ScalingReport report;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    ScalingCell cell;
    cell.point = grid[p];
    cell.cases.assign(outcomes.begin() + static_cast<std::ptrdiff_t>(p * n_cases),
                      outcomes.begin() + static_cast<std::ptrdiff_t>((p + 1) * n_cases));
    cell.ape = summarize(cell.cases, [](const auto& c) { return c.ape; });
    cell.l1 = summarize(cell.cases, [](const auto& c) { return c.l1; });
    cell.f1 = summarize(cell.cases, [](const auto& c) { return c.f1; });
    cell.jsd = summarize(cell.cases, [](const auto& c) { return c.jsd; });
    cell.tokens_used = summarize(cell.cases, [](const auto& c) { return c.tokens_used; });
    cell.documents_read = summarize(cell.cases, [](const auto& c) { return c.documents_read; });
    cell.reasoning_steps = summarize(cell.cases, [](const auto& c) { return c.reasoning_steps; });
    report.cells.push_back(std::move(cell));
  }
  return report;
}

ScalingReport measure_scaling(const Suite& suite, std::span<const BudgetPoint> grid,
                              const SelfPlayOptions& options, unsigned threads) {
  FixtureBackend backend(suite.corpus);
  return measure_scaling(suite, grid, backend, options, threads);
}

json to_json(const ScalingReport& r) {
  json cells = json::array();
  for (const auto& c : r.cells) {
    json cases = json::array();
    for (const auto& o : c.cases) {
      cases.push_back({{"query", o.query},
                       {"co2e", o.co2e},
                       {"ape", o.ape},
                       {"l1", o.l1},
                       {"f1", o.f1},
                       {"jsd", o.jsd},
                       {"tokens_used", o.tokens_used},
                       {"documents_read", o.documents_read},
                       {"reasoning_steps", o.reasoning_steps},
                       {"elapsed_ms", o.elapsed_ms},
                       {"stop_reason", o.stop_reason}});
    }
    cells.push_back({{"label", c.point.label},
                     {"budget", c.point.budget},
                     {"ape", mean_sd_json(c.ape)},
                     {"l1", mean_sd_json(c.l1)},
                     {"f1", mean_sd_json(c.f1)},
                     {"jsd", mean_sd_json(c.jsd)},
                     {"tokens_used", mean_sd_json(c.tokens_used)},
                     {"documents_read", mean_sd_json(c.documents_read)},
                     {"reasoning_steps", mean_sd_json(c.reasoning_steps)},
                     {"cases", cases}});
  }
  return json{{"cells", cells}};
}

void write_csv(std::ostream& out, const ScalingReport& r) {
  out << "label,max_thinking_ms,max_rounds,max_documents,query,co2e,ape,l1,f1,jsd,tokens_used,"
         "documents_read,reasoning_steps,elapsed_ms,stop_reason\n";
  for (const auto& c : r.cells) {
    for (const auto& o : c.cases) {
      out << csv::join({c.point.label, std::to_string(c.point.budget.max_thinking_ms),
                        std::to_string(c.point.budget.max_rounds),
                        std::to_string(c.point.budget.max_documents), o.query,
                        csv::format_number(o.co2e), csv::format_number(o.ape),
                        csv::format_number(o.l1), csv::format_number(o.f1),
                        csv::format_number(o.jsd), std::to_string(o.tokens_used),
                        std::to_string(o.documents_read), std::to_string(o.reasoning_steps),
                        csv::format_number(o.elapsed_ms), o.stop_reason})
          << '\n';
    }
  }
}

}  // namespace carbonforge::agent
