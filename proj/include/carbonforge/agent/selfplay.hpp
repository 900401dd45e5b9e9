#pragma once

#include <optional>
#include <string>
#include <vector>

#include "carbonforge/agent/backend.hpp"
#include "carbonforge/agent/critic.hpp"
#include "carbonforge/core/inventory.hpp"
#include "carbonforge/core/json.hpp"
#include "carbonforge/vision/detector.hpp"

namespace carbonforge::agent {

inline constexpr const char* kTranscriptVersion = "1";

struct Budget {
  long max_thinking_ms = 60000;
  int max_rounds = 8;
  int max_documents = 64;

  bool operator==(const Budget&) const = default;
};

/// Throws a usage error unless every limit is positive.
void check_budget(const Budget& b);

/// Simulated thinking time for deterministic backends: each round costs
/// overhead + per-token + per-document time.
struct CostModel {
  double round_overhead_ms = 1500.0;
  double ms_per_token = 4.0;
  double ms_per_document = 1200.0;

  bool operator==(const CostModel&) const = default;
};

struct LciDelta {
  std::size_t entries_added = 0;
  std::size_t entries_removed = 0;
  std::size_t attributes_set = 0;

  bool operator==(const LciDelta&) const = default;
};

struct Round {
  std::vector<CriticQuery> queries;
  /// Read units in order: one text document, or an image batch.
  std::vector<std::vector<std::string>> reads;
  LciDelta delta;
  std::size_t tokens = 0;
  /// Cumulative thinking time at the end of the round.
  double elapsed_ms = 0.0;

  bool operator==(const Round&) const = default;
};

enum class StopReason { converged, max_rounds, max_thinking_time, max_documents, stalled, error };

std::string_view to_string(StopReason r);

struct AgentTranscript {
  std::string version = kTranscriptVersion;
  std::string query;
  Budget budget;
  std::vector<Round> rounds;
  double elapsed_ms = 0.0;
  std::size_t documents_read = 0;
  std::size_t reasoning_steps = 0;
  std::size_t tokens_used = 0;
  /// Longest single round: the most the time budget can be overrun by,
  /// since budgets are checked between rounds.
  double grace_ms = 0.0;
  StopReason stop_reason = StopReason::converged;
  std::optional<std::string> error;
  std::vector<std::string> warnings;

  bool operator==(const AgentTranscript&) const = default;
};

struct SelfPlayOptions {
  CostModel cost;
  /// Defaults to a BlobDetector when null.
  vision::ComponentDetector* detector = nullptr;
  double rank_lambda = 1.0;
};

struct SelfPlayResult {
  LifeCycleInventory lci;
  AgentTranscript transcript;
  bool ok() const { return !transcript.error.has_value(); }
};

/// Critic/retriever loop. Each round the critic audits the inventory; the
/// retriever reads, per query, one unread text document or the batch of
/// unread images for the key, and the inventory is updated from what was
/// read. Stops on an empty critique, an exhausted budget, or a round that
/// finds nothing new. Backend failures end the run with a partial inventory
/// and the error recorded in the transcript.
SelfPlayResult run_selfplay(const std::string& query, const Budget& budget, QueryBackend& backend,
                            const SelfPlayOptions& options = {});

/// Applies one read unit to the inventory. Shared by run and replay.
LciDelta apply_read(LifeCycleInventory& lci, const std::vector<ingest::DocumentFixture>& docs,
                    vision::ComponentDetector& detector, double rank_lambda,
                    std::vector<std::string>& warnings);

/// Rebuilds the final inventory from the transcript's reads.
LifeCycleInventory replay(const AgentTranscript& transcript, QueryBackend& backend,
                          const SelfPlayOptions& options = {});

void to_json(json& j, const Budget& b);
void from_json(const json& j, Budget& b);
json to_json(const AgentTranscript& t);

}  // namespace carbonforge::agent
