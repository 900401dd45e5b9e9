#include "carbonforge/agent/document.hpp"

#include <cmath>
#include <sstream>

#include "carbonforge/core/error.hpp"
#include "../ingestion/text_util.hpp"

namespace carbonforge::agent {

namespace {

using ingest::detail::trim;

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// "<keyword> <rest>" → rest, when the line starts with keyword + space.
bool strip_keyword(std::string_view line, std::string_view keyword, std::string_view& rest) {
  if (line.size() <= keyword.size() || line.substr(0, keyword.size()) != keyword ||
      line[keyword.size()] != ' ') {
    return false;
  }
  rest = trim(line.substr(keyword.size() + 1));
  return true;
}

}  // namespace

FeatureValue parse_value(std::string_view text) {
  text = trim(text);
  if (auto x = ingest::detail::parse_double(text); x && std::isfinite(*x)) return *x;
  return std::string(text);
}

std::vector<DocLine> parse_document(std::string_view text) {
  std::vector<DocLine> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto line = trim(raw);
    std::string_view rest;
    const auto fail = [&](const std::string& why) {
      throw_data_error("document line " + std::to_string(lineno) + ": " + why);
    };
    if (strip_keyword(line, "entry", rest)) {
      const auto f = split(rest, '|');
      if (f.size() < 4 || f.size() > 5) fail("entry needs class | description | quantity | unit");
      DocLine d{DocLine::Kind::entry, {}, {}, {}, {}};
      d.entry.component_class = f[0];
      d.entry.description = f[1];
      const auto q = ingest::detail::parse_double(f[2]);
      if (!q) fail("quantity '" + f[2] + "' is not a number");
      d.entry.quantity = *q;
      const auto unit = try_parse_unit(f[3]);
      if (!unit) fail("unknown unit '" + f[3] + "'");
      d.entry.unit = *unit;
      if (f.size() == 5 && !f[4].empty()) {
        for (const auto& kv : split(f[4], ';')) {
          if (kv.empty()) continue;
          const auto eq = kv.find('=');
          if (eq == std::string::npos) fail("attribute '" + kv + "' lacks '='");
          d.entry.attributes[std::string(trim(std::string_view(kv).substr(0, eq)))] =
              parse_value(std::string_view(kv).substr(eq + 1));
        }
      }
      out.push_back(std::move(d));
    } else if (strip_keyword(line, "attr", rest)) {
      const auto f = split(rest, '|');
      if (f.size() != 2) fail("attr needs class | name = value");
      const auto eq = f[1].find('=');
      if (eq == std::string::npos) fail("attr needs name = value");
      DocLine d{DocLine::Kind::attribute, {}, {}, {}, {}};
      d.entry.component_class = f[0];
      d.attribute = std::string(trim(std::string_view(f[1]).substr(0, eq)));
      d.value = parse_value(std::string_view(f[1]).substr(eq + 1));
      out.push_back(std::move(d));
    } else if (strip_keyword(line, "ref", rest)) {
      const auto f = split(rest, '|');
      if (f.size() != 3 || f[2].empty()) fail("ref needs class | description | key");
      DocLine d{DocLine::Kind::reference, {}, {}, {}, {}};
      d.entry.component_class = f[0];
      d.entry.description = f[1];
      d.key = f[2];
      out.push_back(std::move(d));
    } else if (strip_keyword(line, "resolves", rest)) {
      DocLine d{DocLine::Kind::resolves, {}, {}, {}, std::string(rest)};
      out.push_back(std::move(d));
    }
  }
  return out;
}

}  // namespace carbonforge::agent
