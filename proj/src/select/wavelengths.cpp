#include "specsel/select/wavelengths.hpp"

#include <algorithm>
#include <cmath>

#include "specsel/error.hpp"

namespace specsel {

WavelengthHistogram wavelength_histogram(const FeatureSet& feature_set,
                                         const IndexRegistry& registry,
                                         const WavelengthHistogramOptions& options) {
  if (!(options.bin_width_nm > 0.0) || !(options.lo_nm < options.hi_nm))
    fail(ErrorCode::invalid_argument, "wavelength histogram needs a positive bin width and lo < hi");
  const double span = options.hi_nm - options.lo_nm;
  const auto bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(span / options.bin_width_nm)));
  const double width = span / static_cast<double>(bins);

  WavelengthHistogram h;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = options.lo_nm + static_cast<double>(i) * width;
  h.edges.back() = options.hi_nm;
  h.counts.assign(bins, 0);

  for (const auto& name : feature_set.selected) {
    const IndexDefinition* def = registry.find(name);
    if (!def) {
      h.missing_features.push_back(name);
      continue;
    }
    const auto wavelengths =
        options.count_repeats ? def->expression.terminal_wavelengths() : def->wavelengths_used;
    for (double w : wavelengths) {
      ++h.total_references;
      if (w > options.hi_nm) {
        ++h.overflow;
        h.overflow_wavelengths.push_back(w);
      } else if (w < options.lo_nm) {
        ++h.underflow;
      } else {
        auto bin = std::min(bins - 1, static_cast<std::size_t>((w - options.lo_nm) / width));
        while (bin > 0 && w < h.edges[bin]) --bin;
        while (bin + 1 < bins && w >= h.edges[bin + 1]) ++bin;
        ++h.counts[bin];
      }
    }
  }
  std::sort(h.overflow_wavelengths.begin(), h.overflow_wavelengths.end());
  return h;
}

}  // namespace specsel
