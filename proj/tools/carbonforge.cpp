#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "carbonforge/agent/scaling.hpp"
#include "carbonforge/agent/selfplay.hpp"
#include "carbonforge/core/error.hpp"
#include "carbonforge/core/json.hpp"
#include "carbonforge/efgen/benchmark.hpp"
#include "carbonforge/efgen/embedding.hpp"
#include "carbonforge/efgen/grid_ef.hpp"
#include "carbonforge/efgen/material_ef.hpp"
#include "carbonforge/eval/experiments.hpp"
#include "carbonforge/eval/synthetic.hpp"
#include "carbonforge/ingestion/efdb.hpp"
#include "carbonforge/ingestion/grid.hpp"
#include "carbonforge/ingestion/pcf.hpp"
#include "carbonforge/knn/calibration.hpp"
#include "carbonforge/knn/estimator.hpp"
#include "carbonforge/knn/index.hpp"
#include "carbonforge/lcia/assess.hpp"
#include "carbonforge/lcia/deviation.hpp"
#include "carbonforge/vision/board.hpp"
#include "carbonforge/vision/hpf.hpp"
#include "carbonforge/vision/process_detector.hpp"

namespace cf = carbonforge;
using cf::json;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) cf::throw_data_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) { return cf::parse_json_text(read_text(path), path); }

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) cf::throw_data_error("cannot open " + path);
  return in;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

void report_rejected(const std::vector<cf::ingest::RowReport>& rejected) {
  for (const auto& r : rejected) std::cerr << "line " << r.line << ": " << r.message << '\n';
}

/// {schema, records: [{id, values, target}]}, a PCF CSV, or a grid CSV.
std::vector<cf::knn::IndexedRecord> load_dataset(const std::string& path) {
  const bool csv = path.size() > 4 && path.substr(path.size() - 4) == ".csv";
  if (csv) {
    auto in = open_input(path);
    std::string header;
    std::getline(in, header);
    in.seekg(0);
    if (header.rfind("region,", 0) == 0) {
      auto parsed = cf::ingest::parse_grid_records(in);
      report_rejected(parsed.rejected);
      return cf::eval::grid_records_to_dataset(parsed.records);
    }
    auto parsed = cf::ingest::parse_pcf_records(in);
    report_rejected(parsed.rejected);
    return cf::knn::build_index(parsed.records, "pcf").records();
  }
  const auto j = read_json(path);
  try {
    auto schema = std::make_shared<const cf::FeatureSchema>(j.at("schema").get<cf::FeatureSchema>());
    std::vector<cf::knn::IndexedRecord> out;
    for (const auto& r : j.at("records")) {
      out.push_back({r.at("id").get<std::string>(), cf::values_from_json(schema, r.at("values")),
                     r.at("target").get<double>()});
    }
    return out;
  } catch (const json::exception& e) {
    cf::throw_data_error(path + ": " + e.what());
  }
}

std::vector<cf::EmissionFactor> load_efdb(const std::string& path) {
  auto in = open_input(path);
  auto parsed = cf::ingest::parse_efdb(in);
  if (!parsed.rejected.empty()) {
    report_rejected(parsed.rejected);
    cf::throw_data_error(path + ": " + std::to_string(parsed.rejected.size()) + " bad lines");
  }
  return std::move(parsed.records);
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v{};
    if (!(is >> v)) cf::throw_usage_error("bad list item '" + item + "'");
    out.push_back(v);
  }
  return out;
}

cf::vision::BBox parse_bbox(const std::string& text) {
  const auto v = parse_list<int>(text);
  if (v.size() == 2) return {0, 0, v[0], v[1]};
  if (v.size() != 4) cf::throw_usage_error("bbox must be w,h or x,y,w,h");
  return {v[0], v[1], v[2], v[3]};
}

std::unique_ptr<cf::vision::ComponentDetector> make_detector(const std::string& command) {
  if (command.empty()) return std::make_unique<cf::vision::BlobDetector>();
  std::vector<std::string> argv;
  std::istringstream ss(command);
  for (std::string w; ss >> w;) argv.push_back(w);
  return std::make_unique<cf::vision::ProcessDetector>(std::move(argv));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carbon footprint estimation toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  std::function<void()> action;

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate and canonicalize input records");
  ingest->require_subcommand(1);
  static std::string ingest_file;
  for (const char* kind : {"pcf", "grid", "efdb"}) {
    auto* sub = ingest->add_subcommand(kind, std::string("Parse a ") + kind + " file");
    sub->add_option("file", ingest_file)->required();
    sub->callback([kind, &action] {
      action = [kind] {
        auto in = open_input(ingest_file);
        json out;
        const std::string k = kind;
        if (k == "pcf") {
          auto r = cf::ingest::parse_pcf_records(in);
          report_rejected(r.rejected);
          out = {{"records", r.records}, {"rejected", r.rejected}};
        } else if (k == "grid") {
          auto r = cf::ingest::parse_grid_records(in);
          report_rejected(r.rejected);
          json records = json::array();
          for (const auto& g : r.records) {
            records.push_back({{"region", g.region},
                               {"date", g.date},
                               {"carbon_intensity_g_per_kwh", g.carbon_intensity_g_per_kwh},
                               {"source_shares", cf::values_to_json(g.source_shares)}});
          }
          out = {{"records", records}, {"rejected", r.rejected}};
        } else {
          auto r = cf::ingest::parse_efdb(in);
          report_rejected(r.rejected);
          out = {{"records", r.records}, {"rejected", r.rejected}};
        }
        emit(out);
      };
    });
  }

  // index
  auto* index = app.add_subcommand("index", "Build and calibrate kNN indices");
  index->require_subcommand(1);
  static std::string records_path, category = "default", source_path, target_path;
  auto* build = index->add_subcommand("build", "Build an index snapshot from records");
  build->add_option("--records", records_path, "records JSON, PCF CSV or grid CSV")->required();
  build->add_option("--category", category);
  build->callback([&action] {
    action = [] { emit(cf::knn::index_to_json(cf::knn::build_index(load_dataset(records_path), category))); };
  });
  auto* calib = index->add_subcommand("calibrate", "Fit a median-ratio calibration");
  calib->add_option("--source", source_path, "source records")->required();
  calib->add_option("--target", target_path, "target records")->required();
  calib->callback([&action] {
    action = [] {
      std::vector<double> s, t;
      for (const auto& r : load_dataset(source_path)) s.push_back(r.target);
      for (const auto& r : load_dataset(target_path)) t.push_back(r.target);
      emit(json(cf::knn::fit_calibration(s, t)));
    };
  });

  // estimate
  static std::string index_path, query_path, calibrate_path;
  static std::size_t k = 5, min_overlap = 1;
  auto* estimate = app.add_subcommand("estimate", "kNN weighted Gaussian estimate");
  estimate->add_option("--index", index_path)->required();
  estimate->add_option("--query", query_path, "FeatureVector JSON file")->required();
  estimate->add_option("--k", k)->check(CLI::PositiveNumber);
  estimate->add_option("--min-overlap", min_overlap);
  estimate->add_option("--calibrate", calibrate_path, "CalibrationTransform JSON file");
  estimate->callback([&action] {
    action = [] {
      const auto idx = cf::knn::index_from_json(read_json(index_path));
      const auto qj = read_json(query_path);
      const auto query = qj.contains("schema") ? qj.get<cf::FeatureVector>()
                                               : cf::values_from_json(idx.schema_ptr(), qj);
      auto est = cf::knn::estimate(idx, query, {k, min_overlap});
      if (!calibrate_path.empty()) {
        est = cf::knn::apply_calibration(read_json(calibrate_path).get<cf::knn::CalibrationTransform>(), est);
      }
      emit(json(est));
    };
  });

  // ef
  auto* ef = app.add_subcommand("ef", "Generate emission factors");
  ef->require_subcommand(1);
  static std::string grid_path, db_path, mode_name = "text_plus_domain", exclude_id;
  auto* efgrid = ef->add_subcommand("grid", "Grid carbon intensity from a source mix");
  efgrid->add_option("--grid", grid_path, "grid CSV")->required();
  efgrid->add_option("--query", query_path, "{source: share} JSON file")->required();
  efgrid->add_option("--k", k)->check(CLI::PositiveNumber);
  efgrid->callback([&action] {
    action = [] {
      auto in = open_input(grid_path);
      auto parsed = cf::ingest::parse_grid_records(in);
      report_rejected(parsed.rejected);
      const auto idx = cf::efgen::build_grid_index(parsed.records);
      const auto mix = cf::values_from_json(cf::ingest::grid_source_schema(), read_json(query_path));
      auto opts = cf::efgen::kGridDefaults;
      opts.k = k;
      emit(json(cf::efgen::estimate_grid_ci(idx, mix, opts)));
    };
  });
  auto* efmat = ef->add_subcommand("material", "Material EF from analogous database entries");
  efmat->add_option("--db", db_path, "EF database JSONL")->required();
  efmat->add_option("--query", query_path, "EmissionFactor-shaped JSON (value ignored)")->required();
  efmat->add_option("--k", k)->check(CLI::PositiveNumber);
  efmat->add_option("--mode", mode_name, "text_only | text_plus_domain");
  efmat->add_option("--exclude", exclude_id, "entry id left out of the pool");
  efmat->callback([&action] {
    action = [] {
      cf::efgen::HashingEmbedder embedder;
      std::vector<cf::efgen::MaterialEntry> pool;
      for (const auto& f : load_efdb(db_path)) pool.push_back(cf::efgen::make_material_entry(f, embedder));
      auto qj = read_json(query_path);
      if (!qj.contains("kgco2e_per_unit")) qj["kgco2e_per_unit"] = 1.0;
      if (!qj.contains("id")) qj["id"] = "query";
      if (!qj.contains("unit")) qj["unit"] = "gram";
      const auto query = cf::efgen::make_material_entry(qj.get<cf::EmissionFactor>(), embedder);
      emit(json(cf::efgen::estimate_material_ef(
          pool, query, {k, cf::efgen::parse_material_mode(mode_name), exclude_id})));
    };
  });

  // lcia
  auto* lcia = app.add_subcommand("lcia", "Life cycle impact assessment");
  lcia->require_subcommand(1);
  static std::string lci_path, efdb_path;
  static bool fallback = false, table = false;
  static double threshold = cf::lcia::kDefaultThreshold, reported = 0.0;
  auto* assess = lcia->add_subcommand("assess", "Carbon footprint breakdown of an LCI");
  assess->add_option("--lci", lci_path)->required();
  assess->add_option("--efdb", efdb_path)->required();
  assess->add_flag("--fallback", fallback, "generate factors for unmatched entries");
  assess->add_option("--threshold", threshold)->check(CLI::Range(0.0, 1.0));
  assess->add_flag("--table", table, "also print a text table to stderr");
  assess->callback([&action] {
    action = [] {
      const auto lci = read_json(lci_path).get<cf::LifeCycleInventory>();
      cf::lcia::AssessOptions opts;
      opts.fallback = fallback;
      opts.threshold = threshold;
      const auto b = cf::lcia::assess(lci, load_efdb(efdb_path), opts);
      if (table) std::cerr << cf::lcia::render_table(lci, b);
      emit(json(b));
    };
  });
  auto* compare = lcia->add_subcommand("compare", "Deviation from a reported footprint");
  compare->add_option("--lci", lci_path)->required();
  compare->add_option("--efdb", efdb_path)->required();
  compare->add_option("--reported", reported, "reported kgCO2e")->required()->check(CLI::PositiveNumber);
  compare->add_flag("--fallback", fallback);
  compare->callback([&action] {
    action = [] {
      const auto lci = read_json(lci_path).get<cf::LifeCycleInventory>();
      cf::lcia::AssessOptions opts;
      opts.fallback = fallback;
      const auto b = cf::lcia::assess(lci, load_efdb(efdb_path), opts);
      cf::ProductRecord rec;
      rec.name = lci.product;
      rec.features = cf::FeatureVector::missing(cf::make_schema({}));
      rec.reported_cf_kgco2e = reported;
      emit(cf::lcia::to_json(cf::lcia::compare_to_reported(b, rec)));
    };
  });

  // vision
  auto* vision = app.add_subcommand("vision", "Teardown image analysis");
  vision->require_subcommand(1);
  static std::vector<std::string> images;
  static double cutoff = cf::vision::kDefaultCutoff, lambda = 1.0, mm_per_px = 0.0;
  static std::string detector_cmd, bbox_text, ref_mm_text, ref_bbox_text, image_path;
  auto* score = vision->add_subcommand("score", "High-pass frequency score");
  score->add_option("images", images)->required();
  score->add_option("--cutoff", cutoff)->check(CLI::PositiveNumber);
  score->callback([&action] {
    action = [] {
      json out = json::array();
      for (const auto& p : images) {
        out.push_back({{"image", p}, {"hf_energy", cf::vision::hpf_score(cf::vision::image_from_file(p, p), cutoff)}});
      }
      emit(out);
    };
  });
  auto* rank = vision->add_subcommand("rank", "Rank candidate board views");
  rank->add_option("images", images)->required();
  rank->add_option("--lambda", lambda);
  rank->add_option("--cutoff", cutoff)->check(CLI::PositiveNumber);
  rank->add_option("--detector-cmd", detector_cmd, "external detector command line");
  rank->callback([&action] {
    action = [] {
      std::vector<cf::vision::ImageRef> refs;
      for (const auto& p : images) refs.push_back(cf::vision::image_from_file(p, p));
      const auto det = make_detector(detector_cmd);
      const auto ranking = cf::vision::rank_board_views(refs, *det, lambda, cutoff);
      json skipped = json::array();
      for (const auto& s : ranking.skipped) {
        std::cerr << s.doc_id << ": " << s.message << '\n';
        skipped.push_back({{"doc_id", s.doc_id}, {"message", s.message}});
      }
      emit({{"scores", ranking.scores}, {"skipped", skipped}});
    };
  });
  auto* detect = vision->add_subcommand("detect", "Detect components");
  detect->add_option("image", image_path)->required();
  detect->add_option("--detector-cmd", detector_cmd);
  detect->callback([&action] {
    action = [] {
      const auto det = make_detector(detector_cmd);
      emit(json(det->detect(cf::vision::image_from_file(image_path, image_path))));
    };
  });
  auto* dims = vision->add_subcommand("dims", "Board dimensions in mm");
  dims->add_option("--bbox", bbox_text, "board box px: w,h or x,y,w,h");
  dims->add_option("--image", image_path, "find the board box in this image");
  dims->add_option("--mm-per-px", mm_per_px)->check(CLI::PositiveNumber);
  dims->add_option("--ref-mm", ref_mm_text, "reference component size: w,h");
  dims->add_option("--ref-bbox", ref_bbox_text, "reference component box px");
  dims->callback([&action] {
    action = [] {
      if (bbox_text.empty() == image_path.empty()) cf::throw_usage_error("give exactly one of --bbox, --image");
      const auto board = bbox_text.empty()
                             ? cf::vision::find_board_bbox(cf::vision::decode_gray(cf::vision::image_from_file(image_path)))
                             : parse_bbox(bbox_text);
      cf::vision::ScaleCalibration cal;
      if (mm_per_px > 0.0) {
        cal = cf::vision::identity_calibration();
        cal.mm_per_px = cal.ratio_w = cal.ratio_h = mm_per_px;
      } else if (!ref_mm_text.empty() && !ref_bbox_text.empty()) {
        const auto mm = parse_list<double>(ref_mm_text);
        if (mm.size() != 2) cf::throw_usage_error("--ref-mm must be w,h");
        cal = cf::vision::calibrate_scale(mm[0], mm[1], parse_bbox(ref_bbox_text), "reference");
        if (cal.anisotropy_warning) std::cerr << "warning: axis scales differ by more than 10%\n";
      } else {
        cf::throw_usage_error("give --mm-per-px or both --ref-mm and --ref-bbox");
      }
      emit({{"board_bbox_px", {board.x, board.y, board.w, board.h}},
            {"calibration", cal},
            {"dimensions", cf::vision::board_dimensions(board, cal)}});
    };
  });

  // agent
  auto* agent = app.add_subcommand("agent", "LCI self-play agent");
  agent->require_subcommand(1);
  static std::string product_query, corpus_dir, budget_text, suite_dir, csv_path;
  static std::string rounds_text, thinking_text, documents_text;
  static unsigned threads = 0;
  auto* run = agent->add_subcommand("run", "Build an LCI for one product");
  run->add_option("--query", product_query, "product name")->required();
  run->add_option("--corpus", corpus_dir, "fixture corpus directory")->required();
  run->add_option("--budget", budget_text, "budget JSON or file");
  run->add_option("--detector-cmd", detector_cmd);
  run->callback([&action] {
    action = [] {
      cf::agent::Budget budget;
      if (!budget_text.empty()) {
        const auto bj = budget_text.front() == '{' ? cf::parse_json_text(budget_text, "--budget")
                                                   : read_json(budget_text);
        budget = bj.get<cf::agent::Budget>();
      }
      const auto corpus = cf::ingest::Corpus::load(corpus_dir);
      std::unique_ptr<cf::agent::QueryBackend> backend;
      if (std::getenv("CARBONFORGE_BACKEND_URL")) {
        backend = std::make_unique<cf::agent::HttpBackend>(cf::agent::HttpBackend::from_environment());
      } else {
        backend = std::make_unique<cf::agent::FixtureBackend>(corpus);
      }
      const auto det = make_detector(detector_cmd);
      cf::agent::SelfPlayOptions opts;
      opts.detector = det.get();
      const auto result = cf::agent::run_selfplay(product_query, budget, *backend, opts);
      for (const auto& w : result.transcript.warnings) std::cerr << "warning: " << w << '\n';
      emit({{"lci", result.lci}, {"transcript", cf::agent::to_json(result.transcript)}});
      if (!result.ok()) cf::throw_backend_error(*result.transcript.error);
    };
  });
  auto* scaling = agent->add_subcommand("scaling", "Budget sweep over a fixture suite");
  scaling->add_option("--suite", suite_dir)->required();
  scaling->add_option("--budget", budget_text, "base budget JSON or file");
  auto* by_rounds = scaling->add_option("--rounds", rounds_text, "e.g. 1,2,4,8");
  auto* by_time = scaling->add_option("--thinking-ms", thinking_text, "e.g. 5000,10000");
  auto* by_docs = scaling->add_option("--documents", documents_text, "e.g. 4,8,16");
  by_rounds->excludes(by_time)->excludes(by_docs);
  by_time->excludes(by_docs);
  scaling->add_option("--csv", csv_path, "also write per-run rows here");
  scaling->add_option("--threads", threads);
  scaling->callback([&action] {
    action = [] {
      cf::agent::Budget base;
      if (!budget_text.empty()) {
        const auto bj = budget_text.front() == '{' ? cf::parse_json_text(budget_text, "--budget")
                                                   : read_json(budget_text);
        base = bj.get<cf::agent::Budget>();
      }
      std::vector<cf::agent::BudgetPoint> grid;
      if (!thinking_text.empty()) {
        grid = cf::agent::thinking_grid(parse_list<long>(thinking_text), base);
      } else if (!documents_text.empty()) {
        grid = cf::agent::documents_grid(parse_list<int>(documents_text), base);
      } else {
        grid = cf::agent::rounds_grid(parse_list<int>(rounds_text.empty() ? "1,2,4,8" : rounds_text), base);
      }
      for (const auto& p : grid) cf::agent::check_budget(p.budget);
      const auto suite = cf::agent::load_suite(suite_dir);
      const auto report = cf::agent::measure_scaling(suite, grid, {}, threads);
      if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        cf::agent::write_csv(out, report);
      }
      emit(cf::agent::to_json(report));
    };
  });

  // eval
  auto* eval = app.add_subcommand("eval", "Experiment drivers");
  eval->require_subcommand(1);
  static std::size_t synthetic_grid = 0, folds = 5, repeats = 10, n_masked = 0;
  static double holdout = 0.2;
  static std::uint64_t seed = 0;
  static std::string sizes_text, fractions_text;
  const auto add_data_options = [](CLI::App* sub) {
    auto* rec = sub->add_option("--records", records_path, "records JSON, PCF CSV or grid CSV");
    auto* syn = sub->add_option("--synthetic-grid", synthetic_grid, "use an n-region synthetic grid world");
    rec->excludes(syn);
    sub->add_option("--seed", seed);
    sub->add_option("--k", k)->check(CLI::PositiveNumber);
    sub->add_option("--min-overlap", min_overlap);
    sub->add_option("--csv", csv_path, "also write a CSV report here");
  };
  const auto dataset = [] {
    if (synthetic_grid > 0) {
      return cf::eval::grid_records_to_dataset(cf::eval::synthetic_grid_world(synthetic_grid, seed));
    }
    if (records_path.empty()) cf::throw_usage_error("give --records or --synthetic-grid");
    return load_dataset(records_path);
  };
  const auto write_csv = [](const auto& report) {
    if (csv_path.empty()) return;
    std::ofstream out(csv_path);
    cf::eval::write_csv(out, report);
  };
  auto* cv = eval->add_subcommand("cv", "Holdout plus k-fold cross-validation");
  add_data_options(cv);
  cv->add_option("--folds", folds)->check(CLI::Range(2, 1000));
  cv->add_option("--holdout", holdout)->check(CLI::Range(0.0, 0.99));
  cv->callback([&action, dataset, write_csv] {
    action = [dataset, write_csv] {
      const auto report = cf::eval::kfold_cv(dataset(), folds, holdout, seed, {k, min_overlap});
      write_csv(report);
      emit(cf::eval::to_json(report));
    };
  });
  auto* sweep = eval->add_subcommand("scaling", "Training-size sweep");
  add_data_options(sweep);
  sweep->add_option("--sizes", sizes_text, "e.g. 5,10,20,40,80,120");
  sweep->add_option("--repeats", repeats)->check(CLI::PositiveNumber);
  sweep->callback([&action, dataset, write_csv] {
    action = [dataset, write_csv] {
      const auto sizes = sizes_text.empty() ? cf::eval::kDefaultSizes : parse_list<std::size_t>(sizes_text);
      const auto report = cf::eval::scaling_sweep(dataset(), sizes, repeats, seed, {k, min_overlap});
      write_csv(report);
      emit(cf::eval::to_json(report));
    };
  });
  auto* masking = eval->add_subcommand("masking", "Missing-feature sweep");
  add_data_options(masking);
  masking->add_option("--fractions", fractions_text, "e.g. 0,0.25,0.5");
  masking->add_option("--repeats", repeats)->check(CLI::PositiveNumber);
  masking->callback([&action, dataset, write_csv] {
    action = [dataset, write_csv] {
      const auto fractions = parse_list<double>(fractions_text.empty() ? "0,0.1,0.2,0.3,0.4,0.5" : fractions_text);
      const auto report = cf::eval::masking_sweep(dataset(), fractions, repeats, seed, {k, min_overlap});
      write_csv(report);
      emit(cf::eval::to_json(report));
    };
  });
  auto* bench = eval->add_subcommand("benchmark", "Masked material EF benchmark");
  bench->add_option("--db", db_path, "material EF JSONL")->required();
  bench->add_option("--n", n_masked, "entries to mask (default all)");
  bench->add_option("--k", k)->check(CLI::PositiveNumber);
  bench->add_option("--mode", mode_name, "text_only | text_plus_domain");
  bench->add_option("--seed", seed);
  bench->add_option("--csv", csv_path);
  bench->callback([&action] {
    action = [] {
      cf::efgen::HashingEmbedder embedder;
      std::vector<cf::efgen::MaterialEntry> pool;
      for (const auto& f : load_efdb(db_path)) pool.push_back(cf::efgen::make_material_entry(f, embedder));
      const auto report = cf::efgen::run_masked_benchmark(
          pool, n_masked == 0 ? pool.size() : n_masked, k, cf::efgen::parse_material_mode(mode_name), seed);
      if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        cf::efgen::write_csv(out, report);
      }
      emit(cf::efgen::to_json(report));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cerr << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    std::cerr << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    action();
  } catch (const cf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case cf::ErrorKind::usage: return 1;
      case cf::ErrorKind::data: return 2;
      case cf::ErrorKind::backend: return 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
