#include <cstdlib>

#include <httplib.h>
#include <openssl/evp.h>

#include "carbonforge/agent/backend.hpp"
#include "carbonforge/core/error.hpp"

namespace carbonforge::agent {

namespace {

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw_data_error("payload_base64 has a bad length");
  std::string out(3 * text.size() / 4, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw_data_error("payload_base64 is not valid base64");
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

}  // namespace

json document_to_json(const ingest::DocumentFixture& d) {
  json j{{"doc_id", d.doc_id},
         {"query_keys", d.query_keys},
         {"modality", std::string(ingest::to_string(d.modality))}};
  if (d.modality == ingest::Modality::image) {
    j["payload_base64"] = base64_encode(d.payload);
  } else {
    j["payload"] = d.payload;
  }
  if (d.reference) {
    j["reference"] = {{"label", d.reference->label},
                      {"known_w_mm", d.reference->known_w_mm},
                      {"known_h_mm", d.reference->known_h_mm}};
  }
  return j;
}

ingest::DocumentFixture document_from_json(const json& j) {
  ingest::DocumentFixture d;
  try {
    d.doc_id = j.at("doc_id").get<std::string>();
    d.query_keys = j.value("query_keys", std::vector<std::string>{});
    d.modality = ingest::parse_modality(j.value("modality", std::string("text")));
    if (j.contains("payload_base64")) {
      d.payload = base64_decode(j.at("payload_base64").get<std::string>());
    } else {
      d.payload = j.value("payload", std::string{});
    }
    if (j.contains("reference") && !j.at("reference").is_null()) {
      const auto& r = j.at("reference");
      d.reference = ingest::ReferenceComponent{r.value("label", std::string{}),
                                               r.at("known_w_mm").get<double>(),
                                               r.at("known_h_mm").get<double>()};
    }
  } catch (const json::exception& e) {
    throw_data_error(std::string("document: ") + e.what());
  }
  return d;
}

HttpBackend::HttpBackend(std::string base_url, std::string api_key)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)) {
  if (base_url_.empty()) throw_usage_error("backend URL is empty");
}

HttpBackend HttpBackend::from_environment() {
  const char* url = std::getenv("CARBONFORGE_BACKEND_URL");
  if (!url || !*url) throw_usage_error("CARBONFORGE_BACKEND_URL is not set");
  const char* key = std::getenv("CARBONFORGE_API_KEY");
  return HttpBackend(url, key ? key : "");
}

namespace {

httplib::Headers auth_headers(const std::string& api_key) {
  httplib::Headers h;
  if (!api_key.empty()) h.emplace("Authorization", "Bearer " + api_key);
  return h;
}

json parse_body(const httplib::Result& res, const std::string& what) {
  if (!res) throw_backend_error(what + ": " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw_backend_error(what + ": HTTP " + std::to_string(res->status));
  }
  try {
    return json::parse(res->body);
  } catch (const json::exception& e) {
    throw_backend_error(what + ": invalid JSON response");
  }
}

}  // namespace

json HttpBackend::post(const std::string& path, const json& body) {
  httplib::Client client(base_url_);
  client.set_connection_timeout(10);
  client.set_read_timeout(120);
  auto res = client.Post(path, auth_headers(api_key_), body.dump(), "application/json");
  return parse_body(res, "POST " + path);
}

std::vector<ingest::DocumentFixture> HttpBackend::search(const std::string& query,
                                                         std::optional<ingest::Modality> modality) {
  json body{{"query", query},
            {"modality", modality ? json(std::string(ingest::to_string(*modality))) : json()}};
  const auto res = post("/search", body);
  std::vector<ingest::DocumentFixture> out;
  try {
    for (const auto& d : res.at("documents")) out.push_back(document_from_json(d));
  } catch (const json::exception&) {
    throw_backend_error("/search response lacks a documents array");
  } catch (const Error& e) {
    throw_backend_error(std::string("/search: ") + e.what());
  }
  return out;
}

Answer HttpBackend::answer(const std::string& question,
                           const std::vector<ingest::DocumentFixture>& context) {
  json docs = json::array();
  for (const auto& d : context) docs.push_back(document_to_json(d));
  const auto res = post("/answer", json{{"question", question}, {"documents", docs}});
  Answer a;
  try {
    for (const auto& x : res.value("assertions", json::array())) {
      a.assertions.push_back(x.get<Assertion>());
    }
    a.tokens = res.value("tokens", std::size_t{0});
  } catch (const json::exception&) {
    throw_backend_error("/answer response is malformed");
  } catch (const Error& e) {
    throw_backend_error(std::string("/answer: ") + e.what());
  }
  return a;
}

ingest::DocumentFixture HttpBackend::fetch(const std::string& doc_id) {
  httplib::Client client(base_url_);
  client.set_connection_timeout(10);
  auto res = client.Get("/documents/" + doc_id, auth_headers(api_key_));
  try {
    return document_from_json(parse_body(res, "GET /documents/" + doc_id));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::backend) throw;
    throw_backend_error(e.what());
  }
}

}  // namespace carbonforge::agent
