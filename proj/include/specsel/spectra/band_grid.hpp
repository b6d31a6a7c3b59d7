#pragma once

#include <cstddef>

namespace specsel {

/// Regular wavelength grid of a spectrometer. Band i sits at start + i * step.
struct BandGrid {
  double start_nm = 400.0;
  double step_nm = 2.2;
  std::size_t count = 272;

  /// 400 nm to 996.2 nm in 2.2 nm steps.
  static BandGrid standard() { return {}; }

  double wavelength(std::size_t band) const { return start_nm + static_cast<double>(band) * step_nm; }
  double last_nm() const { return wavelength(count - 1); }

  /// Throws invalid_argument unless step > 0 and count >= 1.
  void validate() const;

  friend bool operator==(const BandGrid&, const BandGrid&) = default;
};

/// Band whose wavelength is closest to `wavelength_nm`; ties go to the lower
/// band. Throws out_of_range when the request lies more than half a step
/// beyond either end of the grid.
std::size_t nearest_band(const BandGrid& grid, double wavelength_nm);

}  // namespace specsel
