#pragma once

#include <span>
#include <string>
#include <vector>

#include "specsel/matrix.hpp"
#include "specsel/spectra/feature_table.hpp"

namespace specsel {

struct PearsonResult {
  double r = 0.0;
  bool degenerate = false;  // one of the inputs has zero variance; r is then 0
};

/// Sample Pearson correlation, clamped to [-1, 1]. Throws invalid_argument on
/// length mismatch or fewer than two values.
PearsonResult pearson(std::span<const double> x, std::span<const double> y);

/// Pearson r between every pair of features, with the target appended as the
/// last label. Degenerate (constant) labels get 0 everywhere, including the
/// diagonal, and are flagged rather than removed.
struct CorrelationMatrix {
  std::vector<std::string> labels;
  Matrix values;
  std::vector<bool> degenerate;
  std::vector<std::size_t> display_order;  // dendrogram leaf order
};

CorrelationMatrix correlation_matrix(const FeatureTable& table);

}  // namespace specsel
