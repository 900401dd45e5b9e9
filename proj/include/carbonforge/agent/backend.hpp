#pragma once

#include <optional>
#include <string>
#include <vector>

#include "carbonforge/core/feature_vector.hpp"
#include "carbonforge/core/json.hpp"
#include "carbonforge/ingestion/corpus.hpp"

namespace carbonforge::agent {

struct Assertion {
  std::string component_class;
  std::string attribute;
  FeatureValue value;
  std::string source_doc_id;

  bool operator==(const Assertion&) const = default;
};

struct Answer {
  std::vector<Assertion> assertions;
  std::size_t tokens = 0;
};

/// Retrieval and answering services for the stakeholder role. Implementations
/// must be safe to share between concurrent runs. Failures are backend errors.
class QueryBackend {
 public:
  virtual ~QueryBackend() = default;
  /// Documents for a retrieval key; nullopt modality means any.
  virtual std::vector<ingest::DocumentFixture> search(const std::string& query,
                                                      std::optional<ingest::Modality> modality) = 0;
  virtual Answer answer(const std::string& question,
                        const std::vector<ingest::DocumentFixture>& context) = 0;
  virtual ingest::DocumentFixture fetch(const std::string& doc_id) = 0;
  /// True when elapsed time should come from the simulated cost model.
  virtual bool deterministic() const { return false; }
};

/// Deterministic backend over a pre-fetched corpus. Answers quote the
/// structured lines of the context documents; tokens are whitespace words in
/// the question, the text context and the answer.
class FixtureBackend final : public QueryBackend {
 public:
  explicit FixtureBackend(const ingest::Corpus& corpus) : corpus_(&corpus) {}

  std::vector<ingest::DocumentFixture> search(const std::string& query,
                                              std::optional<ingest::Modality> modality) override;
  Answer answer(const std::string& question,
                const std::vector<ingest::DocumentFixture>& context) override;
  ingest::DocumentFixture fetch(const std::string& doc_id) override;
  bool deterministic() const override { return true; }

 private:
  const ingest::Corpus* corpus_;
};

/// HTTP JSON client: POST /search, POST /answer, GET /documents/<id>.
/// The API key, when set, is sent as a bearer token.
class HttpBackend final : public QueryBackend {
 public:
  HttpBackend(std::string base_url, std::string api_key = {});
  /// Reads CARBONFORGE_BACKEND_URL and CARBONFORGE_API_KEY; throws a usage
  /// error when the URL is unset.
  static HttpBackend from_environment();

  std::vector<ingest::DocumentFixture> search(const std::string& query,
                                              std::optional<ingest::Modality> modality) override;
  Answer answer(const std::string& question,
                const std::vector<ingest::DocumentFixture>& context) override;
  ingest::DocumentFixture fetch(const std::string& doc_id) override;

 private:
  json post(const std::string& path, const json& body);
  std::string base_url_;
  std::string api_key_;
};

std::size_t count_words(std::string_view text);

json document_to_json(const ingest::DocumentFixture& d);
ingest::DocumentFixture document_from_json(const json& j);

void to_json(json& j, const Assertion& a);
void from_json(const json& j, Assertion& a);

}  // namespace carbonforge::agent
