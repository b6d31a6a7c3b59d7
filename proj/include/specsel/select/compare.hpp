#pragma once

#include <cstdint>

#include "specsel/regress/cv.hpp"
#include "specsel/select/feature_set.hpp"

namespace specsel {

struct ComparisonRow {
  Metrics subset;
  Metrics full;
  std::size_t subset_size = 0;
  std::size_t total_size = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
};

struct Comparison {
  ComparisonRow row;
  RegressionReport subset_report;
  RegressionReport full_report;
};

/// Runs kfold_cv twice on one fold plan built from (n, k, seed): once on the
/// selected columns, once on all columns. Throws invalid_argument when nothing
/// is selected.
Comparison compare_subset_vs_full(const FeatureTable& table, const FeatureSet& feature_set,
                                  std::size_t k, std::uint64_t seed, const ModelConfig& config,
                                  const ProgressFn& progress = {});

}  // namespace specsel
