#pragma once

#include <string>
#include <vector>

#include "specsel/select/feature_set.hpp"
#include "specsel/spectra/index_registry.hpp"

namespace specsel {

struct WavelengthHistogramOptions {
  double bin_width_nm = 2.2;
  double lo_nm = 400.0;
  double hi_nm = 900.0;
  /// Count a wavelength every time it appears in a formula instead of once
  /// per index.
  bool count_repeats = false;
};

/// How often the selected indices consume each part of the spectrum.
struct WavelengthHistogram {
  std::vector<double> edges;        // uniform over [lo, hi]
  std::vector<std::size_t> counts;  // per bin
  std::size_t overflow = 0;         // references above hi
  std::size_t underflow = 0;        // references below lo
  std::vector<double> overflow_wavelengths;   // ascending, with repeats
  std::vector<std::string> missing_features;  // selected but absent from the registry
  std::size_t total_references = 0;           // counts + overflow + underflow
};

/// The bin count is round((hi - lo) / bin_width), at least 1, so the bins tile
/// [lo, hi] exactly; the top edge is inclusive.
WavelengthHistogram wavelength_histogram(const FeatureSet& feature_set,
                                         const IndexRegistry& registry,
                                         const WavelengthHistogramOptions& options = {});

}  // namespace specsel
