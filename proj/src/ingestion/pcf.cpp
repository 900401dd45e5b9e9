#include "carbonforge/ingestion/pcf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "carbonforge/core/error.hpp"
#include "carbonforge/util/csv.hpp"
#include "text_util.hpp"

namespace carbonforge::ingest {

namespace {

constexpr std::array<const char*, 4> kStages = {"manufacturing", "transport", "use", "eol"};
constexpr std::size_t kFirstStageColumn = 5;

SchemaPtr infer_schema(const std::vector<std::string>& names,
                       const std::vector<csv::Row>& rows, std::size_t offset) {
  const auto defaults = default_product_schema();
  std::vector<FeatureSpec> specs;
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (auto idx = defaults->index_of(names[c])) {
      specs.push_back((*defaults)[*idx]);
      continue;
    }
    bool numeric = true;
    for (std::size_t r = 1; r < rows.size() && numeric; ++r) {
      const auto& cells = rows[r].cells;
      if (offset + c >= cells.size()) continue;
      const auto cell = detail::trim(cells[offset + c]);
      if (!cell.empty() && !detail::parse_double(cell)) numeric = false;
    }
    specs.push_back({names[c], numeric ? FeatureKind::numeric : FeatureKind::categorical});
  }
  return make_schema(std::move(specs));
}

ProductRecord parse_row(const std::vector<std::string>& cells, const SchemaPtr& schema) {
  const std::size_t expected = kPcfColumns.size() + schema->size();
  if (cells.size() != expected) {
    throw_data_error("expected " + std::to_string(expected) + " cells, found " +
                     std::to_string(cells.size()));
  }
  ProductRecord r;
  r.company = std::string(detail::trim(cells[0]));
  if (r.company.empty()) throw_data_error("company is empty");
  const auto cat = detail::trim(cells[1]);
  auto category = try_parse_category(cat);
  if (!category) throw_data_error("unknown category '" + std::string(cat) + "'");
  r.category = *category;
  r.name = std::string(detail::trim(cells[2]));
  if (r.name.empty()) throw_data_error("name is empty");

  auto cf = detail::parse_double(cells[3]);
  if (!cf) throw_data_error("reported_cf_kgco2e is not a number");
  r.reported_cf_kgco2e = *cf;

  if (!detail::trim(cells[4]).empty()) {
    auto u = detail::parse_double(cells[4]);
    if (!u) throw_data_error("reported_uncertainty is not a number");
    r.reported_uncertainty = *u;
  }

  std::map<std::string, double> shares;
  for (std::size_t s = 0; s < kStages.size(); ++s) {
    const auto cell = detail::trim(cells[kFirstStageColumn + s]);
    if (cell.empty()) continue;
    auto v = detail::parse_double(cell);
    if (!v) throw_data_error(std::string("stage_") + kStages[s] + " is not a number");
    shares[kStages[s]] = *v;
  }
  if (!shares.empty()) r.stage_shares = std::move(shares);

  std::vector<MaybeFeature> values(schema->size());
  for (std::size_t i = 0; i < schema->size(); ++i) {
    const auto cell = detail::trim(cells[kPcfColumns.size() + i]);
    if (cell.empty()) continue;
    const auto& spec = (*schema)[i];
    if (spec.kind == FeatureKind::numeric) {
      auto v = detail::parse_double(cell);
      if (!v) throw_data_error("feature '" + spec.name + "' is not a number");
      values[i] = *v;
    } else {
      values[i] = std::string(cell);
    }
  }
  r.features = FeatureVector(schema, std::move(values));
  check_invariants(r);
  return r;
}

std::string feature_key(const ProductRecord& r) {
  std::string key(to_string(r.category));
  for (std::size_t i = 0; i < r.features.size(); ++i) {
    key.push_back('\x1f');
    const auto& v = r.features[i];
    if (!v) {
      key += "\x1e";
    } else if (const double* x = std::get_if<double>(&*v)) {
      key += "n" + csv::format_number(*x);
    } else {
      key += "s" + std::get<std::string>(*v);
    }
  }
  return key;
}

}  // namespace

SchemaPtr default_product_schema() {
  static const SchemaPtr schema = make_schema({
      {"cpu_vendor", FeatureKind::categorical},
      {"technology_node_nm", FeatureKind::numeric},
      {"memory_gb", FeatureKind::numeric},
      {"storage_gb", FeatureKind::numeric},
      {"screen_size_in", FeatureKind::numeric},
      {"gpu_class", FeatureKind::categorical},
      {"battery_wh", FeatureKind::numeric},
      {"weight_kg", FeatureKind::numeric},
  });
  return schema;
}

ParseResult<ProductRecord> parse_pcf_records(std::istream& in, SchemaPtr schema) {
  const auto rows = csv::read(in);
  if (rows.empty()) throw_data_error("PCF file is empty: missing column 'company'");
  std::vector<std::string> header;
  for (const auto& h : rows.front().cells) header.emplace_back(detail::trim(h));

  for (std::size_t i = 0; i < kPcfColumns.size(); ++i) {
    if (i >= header.size() ||
        std::find(header.begin(), header.end(), kPcfColumns[i]) == header.end()) {
      throw_data_error(std::string("PCF file is missing column '") + kPcfColumns[i] + "'");
    }
    if (header[i] != kPcfColumns[i]) {
      throw_data_error("PCF column " + std::to_string(i + 1) + " must be '" + kPcfColumns[i] +
                       "', found '" + header[i] + "'");
    }
  }
  std::vector<std::string> feature_names(header.begin() + kPcfColumns.size(), header.end());
  if (schema) {
    for (std::size_t i = 0; i < schema->size(); ++i) {
      const auto& name = (*schema)[i].name;
      if (i >= feature_names.size() || feature_names[i] != name) {
        throw_data_error("PCF file is missing column '" + name + "'");
      }
    }
    if (feature_names.size() != schema->size()) {
      throw_data_error("PCF file has unexpected column '" + feature_names[schema->size()] + "'");
    }
  } else {
    schema = infer_schema(feature_names, rows, kPcfColumns.size());
  }

  ParseResult<ProductRecord> result;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    try {
      result.records.push_back(parse_row(rows[r].cells, schema));
    } catch (const Error& e) {
      result.rejected.push_back({rows[r].line, e.what()});
    }
  }
  return result;
}

void write_pcf_records(std::ostream& out, std::span<const ProductRecord> records) {
  if (records.empty()) {
    std::vector<std::string> header(kPcfColumns.begin(), kPcfColumns.end());
    for (const auto& spec : default_product_schema()->specs()) header.push_back(spec.name);
    out << csv::join(header) << '\n';
    return;
  }
  const auto& schema = records.front().features.schema();
  std::vector<std::string> header(kPcfColumns.begin(), kPcfColumns.end());
  for (const auto& spec : schema.specs()) header.push_back(spec.name);
  out << csv::join(header) << '\n';

  for (const auto& r : records) {
    if (!(r.features.schema() == schema)) throw_data_error("records do not share one schema");
    std::vector<std::string> cells = {r.company, std::string(to_string(r.category)), r.name,
                                      csv::format_number(r.reported_cf_kgco2e)};
    cells.push_back(r.reported_uncertainty ? csv::format_number(*r.reported_uncertainty) : "");
    for (const char* stage : kStages) {
      std::string cell;
      if (r.stage_shares) {
        auto it = r.stage_shares->find(stage);
        if (it != r.stage_shares->end()) cell = csv::format_number(it->second);
      }
      cells.push_back(std::move(cell));
    }
    for (std::size_t i = 0; i < r.features.size(); ++i) {
      const auto& v = r.features[i];
      if (!v) {
        cells.emplace_back();
      } else if (const double* x = std::get_if<double>(&*v)) {
        cells.push_back(csv::format_number(*x));
      } else {
        cells.push_back(std::get<std::string>(*v));
      }
    }
    out << csv::join(cells) << '\n';
  }
}

DedupResult dedup_similar(std::span<const ProductRecord> records) {
  // Representative per group: smallest name, first occurrence on ties.
  std::map<std::string, std::size_t> representative;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto [it, inserted] = representative.emplace(feature_key(records[i]), i);
    if (!inserted && records[i].name < records[it->second].name) it->second = i;
  }
  std::vector<bool> keep(records.size(), false);
  for (const auto& [key, idx] : representative) keep[idx] = true;

  DedupResult out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    (keep[i] ? out.kept : out.excluded).push_back(records[i]);
  }
  return out;
}

}  // namespace carbonforge::ingest
