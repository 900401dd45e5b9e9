#pragma once

#include <array>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "carbonforge/core/records.hpp"
#include "carbonforge/ingestion/report.hpp"

namespace carbonforge::ingest {

/// Fixed leading columns of the PCF interchange CSV, in order. Feature
/// columns follow, one per schema attribute.
inline constexpr std::array<const char*, 9> kPcfColumns = {
    "company",           "category",         "name",
    "reported_cf_kgco2e", "reported_uncertainty", "stage_manufacturing",
    "stage_transport",   "stage_use",        "stage_eol"};

/// Default eight-attribute schema for electronics products.
SchemaPtr default_product_schema();

/// Parses the PCF CSV. With a schema, the feature columns must be exactly the
/// schema's names in order. Without one, known default attributes keep their
/// kind and other columns are numeric when every non-empty cell is a number.
/// A bad header throws; bad rows are reported and skipped.
ParseResult<ProductRecord> parse_pcf_records(std::istream& in, SchemaPtr schema = nullptr);

void write_pcf_records(std::ostream& out, std::span<const ProductRecord> records);

struct DedupResult {
  std::vector<ProductRecord> kept;
  std::vector<ProductRecord> excluded;
};

/// Collapses records whose feature vectors are identical (same present
/// values, same missing slots) into one representative: the
/// lexicographically smallest name. Groups never span categories.
DedupResult dedup_similar(std::span<const ProductRecord> records);

}  // namespace carbonforge::ingest
