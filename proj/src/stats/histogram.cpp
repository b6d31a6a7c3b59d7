#include "specsel/stats/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specsel/error.hpp"

namespace specsel {

std::size_t Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0}) + below + above;
}

Histogram histogram(std::span<const double> values, std::size_t bin_count,
                    std::optional<std::pair<double, double>> range) {
  if (values.empty()) fail(ErrorCode::invalid_argument, "histogram of empty input");
  if (bin_count == 0) fail(ErrorCode::invalid_argument, "histogram needs at least one bin");

  double lo = 0.0, hi = 0.0;
  if (range) {
    std::tie(lo, hi) = *range;
    if (!(lo < hi)) fail(ErrorCode::invalid_argument, "histogram range must satisfy lo < hi");
  } else {
    auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    lo = *mn;
    hi = *mx;
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
  }

  Histogram h;
  h.edges.resize(bin_count + 1);
  const double width = (hi - lo) / static_cast<double>(bin_count);
  for (std::size_t i = 0; i <= bin_count; ++i) h.edges[i] = lo + static_cast<double>(i) * width;
  h.edges.back() = hi;
  h.counts.assign(bin_count, 0);
  for (double v : values) {
    if (v < lo) {
      ++h.below;
    } else if (v > hi) {
      ++h.above;
    } else {
      auto bin = static_cast<std::size_t>(std::floor((v - lo) / width));
      bin = std::min(bin, bin_count - 1);
      // Guard against rounding placing v just left of its computed edge.
      while (bin > 0 && v < h.edges[bin]) --bin;
      while (bin + 1 < bin_count && v >= h.edges[bin + 1]) ++bin;
      ++h.counts[bin];
    }
  }
  return h;
}

}  // namespace specsel
