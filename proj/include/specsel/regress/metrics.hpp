#pragma once

#include <span>

namespace specsel {

struct Metrics {
  double r2 = 0.0;  // NaN when the truth has no variance
  double rmse = 0.0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// 1 - SS_res / SS_tot. Throws on length mismatch, n < 2, or constant truth.
double r2(std::span<const double> truth, std::span<const double> pred);

/// Root mean squared error. Throws on length mismatch or empty input.
double rmse(std::span<const double> truth, std::span<const double> pred);

/// Both metrics; r2 is NaN instead of throwing when truth is constant.
Metrics compute_metrics(std::span<const double> truth, std::span<const double> pred);

}  // namespace specsel
