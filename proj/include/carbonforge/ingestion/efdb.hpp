#pragma once

#include <istream>
#include <ostream>
#include <span>

#include "carbonforge/core/records.hpp"
#include "carbonforge/ingestion/report.hpp"

namespace carbonforge::ingest {

/// One EmissionFactor JSON object per line. Blank lines are skipped; bad
/// lines and duplicate ids are reported with their line number.
ParseResult<EmissionFactor> parse_efdb(std::istream& in);
void write_efdb(std::ostream& out, std::span<const EmissionFactor> factors);

}  // namespace carbonforge::ingest
