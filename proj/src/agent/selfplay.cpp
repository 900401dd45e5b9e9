#include "carbonforge/agent/selfplay.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "carbonforge/agent/data_abstraction.hpp"
#include "carbonforge/agent/document.hpp"
#include "carbonforge/core/error.hpp"
#include "carbonforge/vision/board.hpp"

namespace carbonforge::agent {

namespace {

using Clock = std::chrono::steady_clock;

std::string key_of(const FeatureValue& v) {
  return std::holds_alternative<std::string>(v) ? ingest::lowercase(std::get<std::string>(v)) : "";
}

LciDelta apply_text(LifeCycleInventory& lci, const ingest::DocumentFixture& doc,
                    std::vector<std::string>& warnings) {
  LciDelta delta;
  std::vector<DocLine> lines;
  try {
    lines = parse_document(doc.payload);
  } catch (const Error& e) {
    warnings.push_back(doc.doc_id + ": " + e.what());
    return delta;
  }
  for (auto& line : lines) {
    const auto& cls = line.entry.component_class;
    if (line.kind != DocLine::Kind::resolves && !lci.da.contains(cls)) {
      warnings.push_back(doc.doc_id + ": class '" + cls + "' is outside the data abstraction");
      continue;
    }
    switch (line.kind) {
      case DocLine::Kind::entry:
        if (line.entry.quantity < 0.0) {
          warnings.push_back(doc.doc_id + ": negative quantity ignored");
          break;
        }
        lci.entries.push_back(std::move(line.entry));
        lci.provenance.push_back(doc.doc_id);
        ++delta.entries_added;
        break;
      case DocLine::Kind::attribute:
        for (auto& e : lci.entries) {
          if (e.component_class == cls && !is_placeholder(e) && !e.attributes.count(line.attribute)) {
            e.attributes.emplace(line.attribute, line.value);
            ++delta.attributes_set;
          }
        }
        break;
      case DocLine::Kind::reference:
        lci.entries.push_back({cls, line.entry.description, 0.0, Unit::count,
                               {{kUnresolved, ingest::lowercase(line.key)}}});
        lci.provenance.push_back(doc.doc_id);
        ++delta.entries_added;
        break;
      case DocLine::Kind::resolves: {
        const std::string key = ingest::lowercase(line.key);
        for (std::size_t i = lci.entries.size(); i-- > 0;) {
          const auto& e = lci.entries[i];
          if (is_placeholder(e) && key_of(e.attributes.at(kUnresolved)) == key) {
            lci.entries.erase(lci.entries.begin() + static_cast<std::ptrdiff_t>(i));
            lci.provenance.erase(lci.provenance.begin() + static_cast<std::ptrdiff_t>(i));
            ++delta.entries_removed;
          }
        }
        break;
      }
    }
  }
  return delta;
}

LciDelta apply_images(LifeCycleInventory& lci, const std::vector<ingest::DocumentFixture>& docs,
                      vision::ComponentDetector& detector, double lambda,
                      std::vector<std::string>& warnings) {
  LciDelta delta;
  std::vector<vision::ImageRef> images;
  for (const auto& d : docs) images.push_back({d.doc_id, d.payload, d.payload_path});
  const auto ranking = vision::rank_board_views(images, detector, lambda);
  for (const auto& s : ranking.skipped) warnings.push_back(s.doc_id + ": " + s.message);
  if (ranking.scores.empty()) return delta;

  const auto& top_id = ranking.scores.front().doc_id;
  const auto top = std::find_if(docs.begin(), docs.end(),
                                [&](const auto& d) { return d.doc_id == top_id; });
  if (!top->reference) {
    warnings.push_back(top_id + ": no reference component, board view not measured");
    return delta;
  }
  const vision::ImageRef& ref_image =
      images[static_cast<std::size_t>(std::distance(docs.begin(), top))];
  const auto detections = detector.detect(ref_image);
  const auto* ref = vision::find_reference(detections, top->reference->label);
  if (!ref) {
    warnings.push_back(top_id + ": reference component not detected");
    return delta;
  }
  const auto cal = vision::calibrate_scale(top->reference->known_w_mm,
                                           top->reference->known_h_mm, ref->bbox,
                                           top->reference->label.empty() ? "largest IC"
                                                                         : top->reference->label);
  if (cal.anisotropy_warning) warnings.push_back(top_id + ": anisotropic scale calibration");
  const auto board = vision::find_board_bbox(vision::decode_gray(ref_image));
  for (auto& e : vision::inventory_from_detections(detections, cal, board)) {
    if (!lci.da.contains(e.component_class)) {
      warnings.push_back(top_id + ": detected class '" + e.component_class +
                         "' is outside the data abstraction");
      continue;
    }
    lci.entries.push_back(std::move(e));
    lci.provenance.push_back(top_id);
    ++delta.entries_added;
  }
  return delta;
}

void accumulate(LciDelta& total, const LciDelta& d) {
  total.entries_added += d.entries_added;
  total.entries_removed += d.entries_removed;
  total.attributes_set += d.attributes_set;
}

}  // namespace

void check_budget(const Budget& b) {
  if (b.max_thinking_ms <= 0 || b.max_rounds <= 0 || b.max_documents <= 0) {
    throw_usage_error("budget limits must all be positive");
  }
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::converged: return "converged";
    case StopReason::max_rounds: return "max_rounds";
    case StopReason::max_thinking_time: return "max_thinking_time";
    case StopReason::max_documents: return "max_documents";
    case StopReason::stalled: return "stalled";
    case StopReason::error: return "error";
  }
  return "error";
}

LciDelta apply_read(LifeCycleInventory& lci, const std::vector<ingest::DocumentFixture>& docs,
                    vision::ComponentDetector& detector, double rank_lambda,
                    std::vector<std::string>& warnings) {
  if (docs.empty()) return {};
  if (docs.front().modality == ingest::Modality::image) {
    return apply_images(lci, docs, detector, rank_lambda, warnings);
  }
  LciDelta total;
  for (const auto& d : docs) accumulate(total, apply_text(lci, d, warnings));
  return total;
}

SelfPlayResult run_selfplay(const std::string& query, const Budget& budget, QueryBackend& backend,
                            const SelfPlayOptions& options) {
  check_budget(budget);
  std::vector<std::string> warnings;
  auto da = build_data_abstraction(query, &warnings);
  SelfPlayResult result{{query, std::move(da), {}, {}}, {}};
  auto& lci = result.lci;
  auto& t = result.transcript;
  t.query = query;
  t.budget = budget;
  t.warnings = std::move(warnings);

  vision::BlobDetector default_detector;
  auto& detector = options.detector ? *options.detector : default_detector;
  const bool simulated = backend.deterministic();
  const auto wall_start = Clock::now();
  std::set<std::string> read;

  while (true) {
    const auto queries = critique(lci, lci.da);
    if (queries.empty()) {
      t.stop_reason = StopReason::converged;
      break;
    }
    if (static_cast<int>(t.rounds.size()) >= budget.max_rounds) {
      t.stop_reason = StopReason::max_rounds;
      break;
    }
    if (t.elapsed_ms >= static_cast<double>(budget.max_thinking_ms)) {
      t.stop_reason = StopReason::max_thinking_time;
      break;
    }
    if (static_cast<int>(read.size()) >= budget.max_documents) {
      t.stop_reason = StopReason::max_documents;
      break;
    }

    Round round;
    round.queries = queries;
    const double round_start = t.elapsed_ms;
    std::size_t round_docs = 0;
    try {
      for (const auto& q : queries) {
        std::vector<ingest::DocumentFixture> text_unit;
        std::vector<ingest::DocumentFixture> image_unit;
        for (auto& d : backend.search(q.key, std::nullopt)) {
          if (read.count(d.doc_id)) continue;
          if (static_cast<int>(read.size()) >= budget.max_documents) break;
          if (d.modality == ingest::Modality::image) {
            read.insert(d.doc_id);
            image_unit.push_back(std::move(d));
          } else if (text_unit.empty()) {
            read.insert(d.doc_id);
            text_unit.push_back(std::move(d));
          }
        }
        std::vector<ingest::DocumentFixture> context = text_unit;
        context.insert(context.end(), image_unit.begin(), image_unit.end());
        if (context.empty()) continue;
        round.tokens += backend.answer(q.text, context).tokens;
        for (auto* unit : {&text_unit, &image_unit}) {
          if (unit->empty()) continue;
          std::vector<std::string> ids;
          for (const auto& d : *unit) ids.push_back(d.doc_id);
          round.reads.push_back(std::move(ids));
          round_docs += unit->size();
          accumulate(round.delta, apply_read(lci, *unit, detector, options.rank_lambda,
                                             t.warnings));
        }
      }
    } catch (const Error& e) {
      t.error = e.what();
      t.stop_reason = StopReason::error;
    }

    if (simulated) {
      t.elapsed_ms += options.cost.round_overhead_ms +
                      options.cost.ms_per_token * static_cast<double>(round.tokens) +
                      options.cost.ms_per_document * static_cast<double>(round_docs);
    } else {
      t.elapsed_ms =
          std::chrono::duration<double, std::milli>(Clock::now() - wall_start).count();
    }
    round.elapsed_ms = t.elapsed_ms;
    t.grace_ms = std::max(t.grace_ms, t.elapsed_ms - round_start);
    t.tokens_used += round.tokens;
    const bool stalled = round.reads.empty();
    t.rounds.push_back(std::move(round));
    if (t.error) break;
    if (stalled) {
      t.stop_reason = StopReason::stalled;
      break;
    }
  }
  t.reasoning_steps = t.rounds.size();
  t.documents_read = read.size();
  return result;
}

LifeCycleInventory replay(const AgentTranscript& transcript, QueryBackend& backend,
                          const SelfPlayOptions& options) {
  LifeCycleInventory lci{transcript.query, build_data_abstraction(transcript.query), {}, {}};
  vision::BlobDetector default_detector;
  auto& detector = options.detector ? *options.detector : default_detector;
  std::vector<std::string> warnings;
  for (const auto& round : transcript.rounds) {
    for (const auto& unit : round.reads) {
      std::vector<ingest::DocumentFixture> docs;
      for (const auto& id : unit) docs.push_back(backend.fetch(id));
      apply_read(lci, docs, detector, options.rank_lambda, warnings);
    }
  }
  return lci;
}

void to_json(json& j, const Budget& b) {
  j = json{{"max_thinking_ms", b.max_thinking_ms},
           {"max_rounds", b.max_rounds},
           {"max_documents", b.max_documents}};
}

void from_json(const json& j, Budget& b) {
  try {
    if (!j.is_object()) throw_usage_error("budget must be an object");
    const Budget defaults;
    b.max_thinking_ms = j.value("max_thinking_ms", defaults.max_thinking_ms);
    b.max_rounds = j.value("max_rounds", defaults.max_rounds);
    b.max_documents = j.value("max_documents", defaults.max_documents);
  } catch (const json::exception& e) {
    throw_usage_error(std::string("budget: ") + e.what());
  }
  check_budget(b);
}

json to_json(const AgentTranscript& t) {
  json rounds = json::array();
  for (const auto& r : t.rounds) {
    json queries = json::array();
    for (const auto& q : r.queries) {
      queries.push_back({{"kind", std::string(to_string(q.kind))},
                         {"key", q.key},
                         {"text", q.text},
                         {"component_class", q.component_class},
                         {"attribute", q.attribute ? json(*q.attribute) : json(nullptr)}});
    }
    std::vector<std::string> doc_ids;
    for (const auto& unit : r.reads) doc_ids.insert(doc_ids.end(), unit.begin(), unit.end());
    rounds.push_back({{"critic_queries", queries},
                      {"reads", r.reads},
                      {"doc_ids", doc_ids},
                      {"lci_delta",
                       {{"entries_added", r.delta.entries_added},
                        {"entries_removed", r.delta.entries_removed},
                        {"attributes_set", r.delta.attributes_set}}},
                      {"tokens", r.tokens},
                      {"elapsed_ms", r.elapsed_ms}});
  }
  return json{{"version", t.version},
              {"query", t.query},
              {"budget", t.budget},
              {"rounds", rounds},
              {"elapsed_ms", t.elapsed_ms},
              {"grace_ms", t.grace_ms},
              {"documents_read", t.documents_read},
              {"reasoning_steps", t.reasoning_steps},
              {"tokens_used", t.tokens_used},
              {"stop_reason", std::string(to_string(t.stop_reason))},
              {"error", t.error ? json(*t.error) : json(nullptr)},
              {"warnings", t.warnings}};
}

}  // namespace carbonforge::agent
