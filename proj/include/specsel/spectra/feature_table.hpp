#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "specsel/matrix.hpp"
#include "specsel/spectra/dataset.hpp"
#include "specsel/spectra/index_registry.hpp"

namespace specsel {

/// Samples x features matrix with the aligned regression target. All cells
/// are finite.
struct FeatureTable {
  std::vector<std::string> feature_names;
  Matrix values;
  std::vector<double> target;
  std::string target_name = "target";
  std::vector<std::string> row_ids;  // optional; empty or one per row

  std::size_t n() const noexcept { return values.rows(); }
  std::size_t d() const noexcept { return values.cols(); }

  /// Throws invalid_argument unless n >= 2, d >= 1 and the shapes agree.
  void validate() const;

  std::optional<std::size_t> feature_index(std::string_view name) const;

  /// Sub-table with the named columns in the given order. Unknown names throw
  /// not_found listing the available columns.
  FeatureTable with_features(const std::vector<std::string>& names) const;
};

struct FeatureIngest {
  FeatureTable table;
  std::size_t dropped_rows = 0;  // rows with a missing or non-numeric cell
  std::vector<RowDiagnostic> diagnostics;
  std::vector<std::string> ignored_columns;  // non-numeric columns, e.g. plot ids
};

/// Reads a header + rows CSV. `target_column` names the regression target; every
/// other column whose non-empty cells are all numeric becomes a feature, in
/// header order. A non-numeric column is set aside as the row id (the first
/// one) or ignored. Rows with any empty or unparsable feature/target cell are
/// dropped and counted.
FeatureIngest ingest_feature_csv(std::istream& in, std::string_view target_column);

struct IndexComputation {
  FeatureTable table;
  std::vector<std::string> dropped_no_target;  // sample ids
  std::vector<std::string> dropped_invalid;    // sample ids hit by division by zero
};

/// One column per registry definition, in registry order; one row per sample
/// with a target, in dataset order. Rows where any formula divides by zero or
/// leaves the finite range are dropped, not imputed. Binding failures throw
/// before anything is evaluated.
IndexComputation compute_indices(const SpectralDataset& dataset, const IndexRegistry& registry);

}  // namespace specsel
