#include "carbonforge/ingestion/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "carbonforge/core/error.hpp"
#include "carbonforge/core/json.hpp"

namespace carbonforge::ingest {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw_data_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DocumentFixture fixture_from_json(const json& j, const fs::path& dir) {
  DocumentFixture d;
  try {
    d.doc_id = j.at("doc_id").get<std::string>();
    for (const auto& k : j.value("query_keys", std::vector<std::string>{})) {
      d.query_keys.push_back(lowercase(k));
    }
    d.modality = parse_modality(j.value("modality", std::string("text")));
    if (j.contains("payload_file")) {
      d.payload_path = dir / j.at("payload_file").get<std::string>();
      d.payload = read_file(d.payload_path);
    } else {
      d.payload = j.value("payload", std::string{});
    }
    if (j.contains("reference") && !j.at("reference").is_null()) {
      const auto& r = j.at("reference");
      d.reference = ReferenceComponent{r.value("label", std::string{}),
                                       r.at("known_w_mm").get<double>(),
                                       r.at("known_h_mm").get<double>()};
    }
  } catch (const json::exception& e) {
    throw_data_error("document fixture: " + std::string(e.what()));
  }
  if (d.doc_id.empty()) throw_data_error("document fixture without doc_id");
  return d;
}

}  // namespace

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view to_string(Modality m) {
  switch (m) {
    case Modality::text: return "text";
    case Modality::image: return "image";
    case Modality::pdf_extract: return "pdf-extract";
  }
  return "text";
}

Modality parse_modality(std::string_view text) {
  if (text == "text") return Modality::text;
  if (text == "image") return Modality::image;
  if (text == "pdf-extract") return Modality::pdf_extract;
  throw_data_error("unknown modality '" + std::string(text) + "'");
}

Corpus::Corpus(std::vector<DocumentFixture> docs,
               std::map<std::string, std::vector<std::string>> index)
    : docs_(std::move(docs)) {
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    if (!by_id_.emplace(docs_[i].doc_id, i).second) {
      throw_data_error("duplicate doc_id '" + docs_[i].doc_id + "'");
    }
  }
  for (auto& [key, ids] : index) {
    for (const auto& id : ids) {
      if (!by_id_.count(id)) throw_data_error("index key '" + key + "' names unknown doc " + id);
    }
    auto& slot = index_[lowercase(key)];
    slot.insert(slot.end(), ids.begin(), ids.end());
  }
}

Corpus Corpus::load(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw_data_error("corpus directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json" &&
        e.path().filename() != "index.json") {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<DocumentFixture> docs;
  for (const auto& f : files) {
    docs.push_back(fixture_from_json(parse_json_text(read_file(f), f.string()), dir));
  }

  std::map<std::string, std::vector<std::string>> index;
  const auto index_path = dir / "index.json";
  if (fs::exists(index_path)) {
    try {
      index = parse_json_text(read_file(index_path), "index.json")
                  .get<std::map<std::string, std::vector<std::string>>>();
    } catch (const json::exception& e) {
      throw_data_error("index.json: " + std::string(e.what()));
    }
  } else {
    std::vector<const DocumentFixture*> sorted;
    for (const auto& d : docs) sorted.push_back(&d);
    std::sort(sorted.begin(), sorted.end(),
              [](auto* a, auto* b) { return a->doc_id < b->doc_id; });
    for (const auto* d : sorted) {
      for (const auto& k : d->query_keys) index[k].push_back(d->doc_id);
    }
  }
  return Corpus(std::move(docs), std::move(index));
}

const DocumentFixture* Corpus::find(std::string_view doc_id) const {
  auto it = by_id_.find(doc_id);
  return it == by_id_.end() ? nullptr : &docs_[it->second];
}

const DocumentFixture& Corpus::get(std::string_view doc_id) const {
  const auto* d = find(doc_id);
  if (!d) throw_data_error("unknown document '" + std::string(doc_id) + "'");
  return *d;
}

const std::vector<std::string>& Corpus::lookup(std::string_view key) const {
  static const std::vector<std::string> kEmpty;
  auto it = index_.find(lowercase(key));
  return it == index_.end() ? kEmpty : it->second;
}

}  // namespace carbonforge::ingest
