#include "specsel/stats/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "specsel/error.hpp"

namespace specsel {

std::vector<double> GridAxis::points() const {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + static_cast<double>(i) * step;
  out.back() = hi;
  return out;
}

double silverman_bandwidth(std::span<const double> values) {
  if (values.empty()) fail(ErrorCode::invalid_argument, "bandwidth of empty input");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double range = *mx - *mn;
  const double h = std::max(1.06 * sd * std::pow(n, -0.2), 1e-9 * range);
  return h > 0.0 ? h : 1.0;
}

GridAxis padded_axis(std::span<const double> values, double bandwidth, std::size_t count,
                     double pad) {
  if (values.empty()) fail(ErrorCode::invalid_argument, "axis of empty input");
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  return {*mn - pad * bandwidth, *mx + pad * bandwidth, count};
}

DensityEstimate kde(const Matrix& points, std::span<const GridAxis> axes,
                    std::optional<std::vector<double>> bandwidth) {
  const std::size_t dims = points.cols();
  if (points.rows() == 0) fail(ErrorCode::invalid_argument, "kde needs at least one point");
  if (dims < 1 || dims > 2) fail(ErrorCode::invalid_argument, "kde supports 1 or 2 dimensions");
  if (axes.size() != dims) fail(ErrorCode::invalid_argument, "kde needs one grid axis per dimension");
  for (const auto& a : axes)
    if (a.count == 0) fail(ErrorCode::invalid_argument, "kde evaluation grid is empty");

  DensityEstimate est;
  if (bandwidth) {
    if (bandwidth->size() != dims)
      fail(ErrorCode::invalid_argument, "kde needs one bandwidth per dimension");
    for (double h : *bandwidth)
      if (!(h > 0.0) || !std::isfinite(h))
        fail(ErrorCode::invalid_argument, "kde bandwidth must be positive");
    est.bandwidth = *bandwidth;
  } else {
    for (std::size_t c = 0; c < dims; ++c) est.bandwidth.push_back(silverman_bandwidth(points.column(c)));
  }
  for (const auto& a : axes) est.axes.push_back(a.points());

  const double n = static_cast<double>(points.rows());
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

  // Per-axis kernel values phi((g - s) / h) / h, then a product sum per node.
  std::vector<Matrix> kernel;
  for (std::size_t c = 0; c < dims; ++c) {
    const auto& grid = est.axes[c];
    const double h = est.bandwidth[c];
    Matrix k(grid.size(), points.rows());
    for (std::size_t g = 0; g < grid.size(); ++g) {
      for (std::size_t s = 0; s < points.rows(); ++s) {
        const double u = (grid[g] - points(s, c)) / h;
        k(g, s) = inv_sqrt_2pi * std::exp(-0.5 * u * u) / h;
      }
    }
    kernel.push_back(std::move(k));
  }

  if (dims == 1) {
    est.densities.resize(est.axes[0].size());
    for (std::size_t g = 0; g < est.axes[0].size(); ++g) {
      double sum = 0.0;
      for (double v : kernel[0].row(g)) sum += v;
      est.densities[g] = sum / n;
    }
  } else {
    const std::size_t gx = est.axes[0].size(), gy = est.axes[1].size();
    est.densities.resize(gx * gy);
    for (std::size_t i = 0; i < gx; ++i) {
      auto kx = kernel[0].row(i);
      for (std::size_t j = 0; j < gy; ++j) {
        auto ky = kernel[1].row(j);
        double sum = 0.0;
        for (std::size_t s = 0; s < kx.size(); ++s) sum += kx[s] * ky[s];
        est.densities[i * gy + j] = sum / n;
      }
    }
  }
  return est;
}

}  // namespace specsel
