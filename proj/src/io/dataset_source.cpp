#include "specsel/io/dataset_source.hpp"

#include <cstdio>
#include <sstream>

#include "specsel/error.hpp"
#include "specsel/spectra/dataset.hpp"
#include "specsel/stats/correlation.hpp"
#include "specsel/stats/hcluster.hpp"

namespace specsel {

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json make_dataset_source(std::string_view kind, std::string csv, std::optional<std::string> target,
                         std::string name, std::string registry_text) {
  if (kind != "features" && kind != "reflectance")
    fail(ErrorCode::invalid_argument, "dataset kind must be 'features' or 'reflectance'");
  json source{{"format_version", kFormatVersion},
              {"kind", std::string(kind)},
              {"csv", std::move(csv)},
              {"name", std::move(name)},
              {"registry_text", std::move(registry_text)}};
  if (kind == "features") {
    if (!target || target->empty())
      fail(ErrorCode::invalid_argument, "a feature CSV needs the target column name");
    source["target"] = *target;
  } else if (target) {
    source["target"] = *target;
  }
  return source;
}

std::string dataset_id(const json& source) { return "ds-" + fnv1a_hex(dump(source)); }

namespace {

json row_diagnostics(const std::vector<RowDiagnostic>& rows) {
  json out = json::array();
  for (const auto& d : rows) out.push_back({{"line", d.line}, {"message", d.message}});
  return out;
}

}  // namespace

LoadedDataset load_dataset_source(const json& source) {
  LoadedDataset out;
  const auto kind = source.at("kind").get<std::string>();
  std::istringstream in(source.at("csv").get<std::string>());
  out.registry = IndexRegistry::parse(source.at("registry_text").get<std::string>());
  json diag = json::object();
  if (kind == "features") {
    auto ingest = ingest_feature_csv(in, source.at("target").get<std::string>());
    out.table = std::move(ingest.table);
    diag["dropped_rows"] = ingest.dropped_rows;
    diag["row_diagnostics"] = row_diagnostics(ingest.diagnostics);
    diag["ignored_columns"] = ingest.ignored_columns;
  } else if (kind == "reflectance") {
    auto ingest = ingest_reflectance_csv(in, source.value("name", std::string("reflectance")));
    if (auto it = source.find("target"); it != source.end() && *it != ingest.dataset.target_name)
      fail(ErrorCode::invalid_argument, "reflectance CSV target column is '" +
                                            ingest.dataset.target_name + "', not '" +
                                            it->get<std::string>() + "'");
    auto computed = compute_indices(ingest.dataset, out.registry);
    out.table = std::move(computed.table);
    diag["samples"] = ingest.dataset.samples.size();
    diag["grid"] = ingest.dataset.grid;
    diag["row_diagnostics"] = row_diagnostics(ingest.skipped_rows);
    diag["flagged_values"] = ingest.flagged_values;
    diag["dropped_no_target"] = computed.dropped_no_target;
    diag["dropped_invalid"] = computed.dropped_invalid;
  } else {
    fail(ErrorCode::invalid_argument, "dataset kind must be 'features' or 'reflectance'");
  }
  out.table.validate();
  diag["rows"] = out.table.n();
  diag["features"] = out.table.d();
  out.diagnostics = std::move(diag);
  return out;
}

json correlation_payload(const std::string& dataset_id, const FeatureTable& table) {
  const auto matrix = correlation_matrix(table);
  const auto tree = hcluster(matrix);
  return json{{"dataset_id", dataset_id}, {"matrix", matrix}, {"dendrogram", tree}};
}

}  // namespace specsel
