#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace carbonforge::ingest {

enum class Modality { text, image, pdf_extract };

std::string_view to_string(Modality m);
Modality parse_modality(std::string_view text);

/// Physical size of a reference component visible in an image document.
struct ReferenceComponent {
  /// Label the detector reports for the component; empty means "largest IC".
  std::string label;
  double known_w_mm = 0.0;
  double known_h_mm = 0.0;

  bool operator==(const ReferenceComponent&) const = default;
};

struct DocumentFixture {
  std::string doc_id;
  std::vector<std::string> query_keys;
  Modality modality = Modality::text;
  /// Text, or raw file bytes for images.
  std::string payload;
  /// Image documents only: where payload bytes came from (for detectors
  /// that read files).
  std::filesystem::path payload_path;
  std::optional<ReferenceComponent> reference;

  bool operator==(const DocumentFixture&) const = default;
};

/// Pre-fetched document collection. Query keys are case-insensitive.
class Corpus {
 public:
  Corpus() = default;
  /// Throws on duplicate doc ids or index entries naming unknown documents.
  Corpus(std::vector<DocumentFixture> docs, std::map<std::string, std::vector<std::string>> index);

  /// Reads every *.json fixture in `dir` (except index.json). If index.json
  /// exists it maps query key → doc ids; otherwise the index is built from
  /// the fixtures' query_keys in doc id order.
  static Corpus load(const std::filesystem::path& dir);

  const DocumentFixture* find(std::string_view doc_id) const;
  const DocumentFixture& get(std::string_view doc_id) const;
  /// Doc ids for a key, in index order; empty if unknown.
  const std::vector<std::string>& lookup(std::string_view key) const;

  const std::vector<DocumentFixture>& documents() const noexcept { return docs_; }
  const std::map<std::string, std::vector<std::string>>& index() const noexcept { return index_; }

 private:
  std::vector<DocumentFixture> docs_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
  std::map<std::string, std::vector<std::string>> index_;
};

std::string lowercase(std::string_view s);

}  // namespace carbonforge::ingest
