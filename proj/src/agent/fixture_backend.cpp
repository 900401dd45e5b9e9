#include "carbonforge/agent/backend.hpp"

#include <cctype>

#include "carbonforge/agent/document.hpp"
#include "carbonforge/core/error.hpp"

namespace carbonforge::agent {

std::size_t count_words(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

std::vector<ingest::DocumentFixture> FixtureBackend::search(
    const std::string& query, std::optional<ingest::Modality> modality) {
  std::vector<ingest::DocumentFixture> out;
  for (const auto& id : corpus_->lookup(query)) {
    const auto& doc = corpus_->get(id);
    if (!modality || doc.modality == *modality) out.push_back(doc);
  }
  return out;
}

Answer FixtureBackend::answer(const std::string& question,
                              const std::vector<ingest::DocumentFixture>& context) {
  Answer a;
  a.tokens = count_words(question);
  for (const auto& doc : context) {
    if (doc.modality == ingest::Modality::image) {
      a.tokens += 1;
      continue;
    }
    a.tokens += count_words(doc.payload);
    for (const auto& line : parse_document(doc.payload)) {
      Assertion as;
      as.component_class = line.entry.component_class;
      as.source_doc_id = doc.doc_id;
      switch (line.kind) {
        case DocLine::Kind::entry:
          as.attribute = "entry";
          as.value = line.entry.description;
          break;
        case DocLine::Kind::attribute:
          as.attribute = line.attribute;
          as.value = line.value;
          break;
        case DocLine::Kind::reference:
          as.attribute = "reference";
          as.value = line.key;
          break;
        case DocLine::Kind::resolves:
          as.attribute = "resolves";
          as.value = line.key;
          break;
      }
      a.tokens += 2 + count_words(as.component_class) +
                  (std::holds_alternative<std::string>(as.value)
                       ? count_words(std::get<std::string>(as.value))
                       : 1);
      a.assertions.push_back(std::move(as));
    }
  }
  return a;
}

ingest::DocumentFixture FixtureBackend::fetch(const std::string& doc_id) {
  const auto* d = corpus_->find(doc_id);
  if (!d) throw_backend_error("corpus has no document '" + doc_id + "'");
  return *d;
}

void to_json(json& j, const Assertion& a) {
  j = json{{"component_class", a.component_class},
           {"attribute", a.attribute},
           {"value", a.value},
           {"source_doc_id", a.source_doc_id}};
}

void from_json(const json& j, Assertion& a) {
  try {
    a.component_class = j.value("component_class", std::string{});
    a.attribute = j.at("attribute").get<std::string>();
    a.value = feature_value_from_json(j.at("value"));
    a.source_doc_id = j.value("source_doc_id", std::string{});
  } catch (const json::exception& e) {
    throw_data_error(std::string("assertion: ") + e.what());
  }
}

}  // namespace carbonforge::agent
