#include "carbonforge/ingestion/efdb.hpp"

#include <set>
#include <string>

#include "carbonforge/core/error.hpp"
#include "carbonforge/core/json.hpp"
#include "text_util.hpp"

namespace carbonforge::ingest {

ParseResult<EmissionFactor> parse_efdb(std::istream& in) {
  ParseResult<EmissionFactor> result;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    try {
      auto ef = parse_json_text(line, "emission factor").get<EmissionFactor>();
      if (!seen.insert(ef.id).second) throw_data_error("duplicate id '" + ef.id + "'");
      result.records.push_back(std::move(ef));
    } catch (const Error& e) {
      result.rejected.push_back({lineno, e.what()});
    } catch (const json::exception& e) {
      result.rejected.push_back({lineno, e.what()});
    }
  }
  return result;
}

void write_efdb(std::ostream& out, std::span<const EmissionFactor> factors) {
  for (const auto& ef : factors) out << json(ef).dump() << '\n';
}

}  // namespace carbonforge::ingest
