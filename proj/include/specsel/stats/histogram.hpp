#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace specsel {

struct Histogram {
  std::vector<double> edges;        // bin_count + 1 ascending edges
  std::vector<std::size_t> counts;  // per bin
  std::size_t below = 0;            // values < edges.front()
  std::size_t above = 0;            // values > edges.back()

  std::size_t total() const;
};

/// Uniform bins over `range` (default: data min..max). A value equal to the
/// upper edge lands in the last bin. When the default range collapses to a
/// point it is widened to [v - 0.5, v + 0.5]. Throws on empty input,
/// bin_count == 0 or lo >= hi.
Histogram histogram(std::span<const double> values, std::size_t bin_count,
                    std::optional<std::pair<double, double>> range = std::nullopt);

}  // namespace specsel
