#include "specsel/spectra/feature_table.hpp"

#include <istream>

#include "specsel/csv.hpp"
#include "specsel/error.hpp"

namespace specsel {

namespace {

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
  return out;
}

}  // namespace

void FeatureTable::validate() const {
  if (values.cols() != feature_names.size())
    fail(ErrorCode::invalid_argument, "feature name count does not match column count");
  if (values.rows() != target.size())
    fail(ErrorCode::invalid_argument, "target length does not match row count");
  if (!row_ids.empty() && row_ids.size() != target.size())
    fail(ErrorCode::invalid_argument, "row id count does not match row count");
  if (n() < 2) fail(ErrorCode::invalid_argument, "feature table needs at least 2 rows");
  if (d() < 1) fail(ErrorCode::invalid_argument, "feature table needs at least 1 feature");
}

std::optional<std::size_t> FeatureTable::feature_index(std::string_view name) const {
  for (std::size_t j = 0; j < feature_names.size(); ++j)
    if (feature_names[j] == name) return j;
  return std::nullopt;
}

FeatureTable FeatureTable::with_features(const std::vector<std::string>& names) const {
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& name : names) {
    auto j = feature_index(name);
    if (!j)
      fail(ErrorCode::not_found,
           "unknown feature '" + name + "'; available: " + join(feature_names));
    idx.push_back(*j);
  }
  FeatureTable out;
  out.feature_names = names;
  out.values = values.select_cols(idx);
  out.target = target;
  out.target_name = target_name;
  out.row_ids = row_ids;
  return out;
}

FeatureIngest ingest_feature_csv(std::istream& in, std::string_view target_column) {
  auto rows = csv::read(in);
  if (rows.empty()) fail(ErrorCode::parse, "feature CSV is empty (header row required)");
  const auto& header = rows.front().cells;

  std::optional<std::size_t> target_col;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == target_column) target_col = c;
  if (!target_col)
    fail(ErrorCode::invalid_argument, "target column '" + std::string(target_column) +
                                          "' not found; available columns: " + join(header));

  FeatureIngest result;

  // Column is numeric when every non-empty cell parses.
  std::vector<bool> numeric(header.size(), true);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& cells = rows[r].cells;
    for (std::size_t c = 0; c < header.size() && c < cells.size(); ++c)
      if (!cells[c].empty() && !csv::parse_number(cells[c])) numeric[c] = false;
  }
  std::vector<std::size_t> feature_cols;
  std::optional<std::size_t> id_col;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == *target_col) continue;
    if (numeric[c]) {
      feature_cols.push_back(c);
    } else if (!id_col) {
      id_col = c;
    } else {
      result.ignored_columns.push_back(header[c]);
    }
  }
  if (feature_cols.empty()) fail(ErrorCode::invalid_argument, "no numeric feature columns");

  FeatureTable& table = result.table;
  table.target_name = std::string(target_column);
  for (auto c : feature_cols) table.feature_names.push_back(header[c]);

  std::vector<double> flat;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != header.size()) {
      ++result.dropped_rows;
      result.diagnostics.push_back({row.line, "expected " + std::to_string(header.size()) +
                                                  " cells, found " + std::to_string(row.cells.size())});
      continue;
    }
    auto t = csv::parse_number(row.cells[*target_col]);
    std::vector<double> values;
    values.reserve(feature_cols.size());
    std::string bad;
    if (!t) bad = header[*target_col];
    for (auto c : feature_cols) {
      if (!bad.empty()) break;
      auto v = csv::parse_number(row.cells[c]);
      if (!v) bad = header[c];
      else values.push_back(*v);
    }
    if (!bad.empty()) {
      ++result.dropped_rows;
      result.diagnostics.push_back({row.line, "missing or non-numeric value in column '" + bad + "'"});
      continue;
    }
    flat.insert(flat.end(), values.begin(), values.end());
    table.target.push_back(*t);
    if (id_col) table.row_ids.push_back(row.cells[*id_col]);
  }
  if (table.target.size() < 2)
    fail(ErrorCode::invalid_argument, "fewer than 2 complete rows (" +
                                          std::to_string(table.target.size()) + " usable)");
  table.values = Matrix(table.target.size(), feature_cols.size());
  for (std::size_t r = 0; r < table.target.size(); ++r)
    for (std::size_t j = 0; j < feature_cols.size(); ++j)
      table.values(r, j) = flat[r * feature_cols.size() + j];
  table.validate();
  return result;
}

IndexComputation compute_indices(const SpectralDataset& dataset, const IndexRegistry& registry) {
  if (registry.size() == 0) fail(ErrorCode::invalid_argument, "index registry is empty");
  const auto bound = registry.bind(dataset.grid);

  IndexComputation result;
  FeatureTable& table = result.table;
  for (const auto& d : registry.definitions()) table.feature_names.push_back(d.name);
  table.target_name = dataset.target_name;

  std::vector<double> flat;
  std::vector<double> row(bound.size());
  for (const auto& sample : dataset.samples) {
    if (sample.reflectance.size() != dataset.grid.count)
      fail(ErrorCode::invalid_argument,
           "sample '" + sample.sample_id + "' does not match the dataset band grid");
    if (!sample.target) {
      result.dropped_no_target.push_back(sample.sample_id);
      continue;
    }
    bool ok = true;
    for (std::size_t j = 0; j < bound.size() && ok; ++j) {
      auto v = bound[j].evaluate(sample.reflectance);
      if (!v) ok = false;
      else row[j] = *v;
    }
    if (!ok) {
      result.dropped_invalid.push_back(sample.sample_id);
      continue;
    }
    flat.insert(flat.end(), row.begin(), row.end());
    table.target.push_back(*sample.target);
    table.row_ids.push_back(sample.sample_id);
  }
  table.values = Matrix(table.target.size(), bound.size());
  for (std::size_t r = 0; r < table.target.size(); ++r)
    for (std::size_t j = 0; j < bound.size(); ++j) table.values(r, j) = flat[r * bound.size() + j];
  return result;
}

}  // namespace specsel
