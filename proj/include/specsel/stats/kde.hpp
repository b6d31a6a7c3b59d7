#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "specsel/matrix.hpp"

namespace specsel {

/// Evenly spaced evaluation points lo..hi inclusive.
struct GridAxis {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t count = 64;

  std::vector<double> points() const;
};

/// Gaussian product-kernel density on a 1D or 2D grid. For 2D the densities
/// are row-major with the first axis varying slowest.
struct DensityEstimate {
  std::vector<std::vector<double>> axes;
  std::vector<double> densities;
  std::vector<double> bandwidth;
};

/// Silverman's rule 1.06 * sd * n^(-1/5), floored at 1e-9 times the data
/// range. Data with no spread at all gets bandwidth 1.
double silverman_bandwidth(std::span<const double> values);

/// Axis spanning the data range padded by `pad` bandwidths on both sides.
GridAxis padded_axis(std::span<const double> values, double bandwidth, std::size_t count,
                     double pad = 4.0);

/// `points` has one column per dimension (1 or 2) and one axis per column.
/// Missing bandwidths default to silverman_bandwidth of that column.
DensityEstimate kde(const Matrix& points, std::span<const GridAxis> axes,
                    std::optional<std::vector<double>> bandwidth = std::nullopt);

}  // namespace specsel
