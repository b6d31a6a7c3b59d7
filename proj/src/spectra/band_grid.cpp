#include "specsel/spectra/band_grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specsel/error.hpp"

namespace specsel {

void BandGrid::validate() const {
  if (!(step_nm > 0.0) || !std::isfinite(step_nm) || !std::isfinite(start_nm))
    fail(ErrorCode::invalid_argument, "band grid step must be positive and finite");
  if (count < 1) fail(ErrorCode::invalid_argument, "band grid needs at least one band");
}

std::size_t nearest_band(const BandGrid& grid, double wavelength_nm) {
  grid.validate();
  const double half = grid.step_nm / 2.0;
  if (!std::isfinite(wavelength_nm) || wavelength_nm < grid.start_nm - half ||
      wavelength_nm > grid.last_nm() + half) {
    std::ostringstream msg;
    msg << "wavelength " << wavelength_nm << " nm is outside the band grid ["
        << grid.start_nm << ", " << grid.last_nm() << "] nm";
    fail(ErrorCode::out_of_range, msg.str());
  }
  const double pos = (wavelength_nm - grid.start_nm) / grid.step_nm;
  const double max_band = static_cast<double>(grid.count - 1);
  const auto lower = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, max_band));
  const std::size_t upper = std::min(lower + 1, grid.count - 1);
  const double d_lower = std::abs(grid.wavelength(lower) - wavelength_nm);
  const double d_upper = std::abs(grid.wavelength(upper) - wavelength_nm);
  return d_upper < d_lower ? upper : lower;
}

}  // namespace specsel
