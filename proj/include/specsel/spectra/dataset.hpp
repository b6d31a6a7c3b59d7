#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "specsel/spectra/band_grid.hpp"

namespace specsel {

struct SpectralSample {
  std::string sample_id;
  std::vector<double> reflectance;  // one value per grid band
  std::optional<double> target;     // wet biomass, kg
};

struct SpectralDataset {
  std::string name;
  BandGrid grid;
  std::vector<SpectralSample> samples;
  std::string target_name = "target";

  /// Number of reflectance values outside [0, 1]. They are kept, only flagged.
  std::size_t out_of_unit_range() const;
};

/// One skipped or suspicious input row.
struct RowDiagnostic {
  std::size_t line = 0;
  std::string message;
};

struct ReflectanceIngest {
  SpectralDataset dataset;
  std::vector<RowDiagnostic> skipped_rows;
  std::size_t flagged_values = 0;  // reflectances outside [0, 1]
};

/// Header: `sample_id, b<nm>, b<nm>, ..., [target]`. The band columns must be
/// an arithmetic progression (1e-6 nm tolerance); the grid is inferred from
/// them. An optional trailing non-band column is the target; an empty target
/// cell means "no target". Rows with a non-numeric cell are skipped and
/// reported. Duplicate sample ids and irregular spacing are hard errors.
ReflectanceIngest ingest_reflectance_csv(std::istream& in, std::string name = "reflectance");

}  // namespace specsel
