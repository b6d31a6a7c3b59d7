#include "specsel/spectra/dataset.hpp"

#include <cmath>
#include <istream>
#include <set>
#include <sstream>

#include "specsel/csv.hpp"
#include "specsel/error.hpp"

namespace specsel {

namespace {

std::optional<double> band_wavelength(const std::string& header) {
  if (header.size() < 2 || (header[0] != 'b' && header[0] != 'B')) return std::nullopt;
  return csv::parse_number(std::string_view(header).substr(1));
}

double round_nm(double v) { return std::round(v * 1e9) / 1e9; }

}  // namespace

std::size_t SpectralDataset::out_of_unit_range() const {
  std::size_t n = 0;
  for (const auto& s : samples)
    for (double r : s.reflectance)
      if (r < 0.0 || r > 1.0) ++n;
  return n;
}

ReflectanceIngest ingest_reflectance_csv(std::istream& in, std::string name) {
  auto rows = csv::read(in);
  if (rows.empty()) fail(ErrorCode::parse, "reflectance CSV is empty (header row required)");
  const auto& header = rows.front().cells;
  if (header.size() < 2) fail(ErrorCode::parse, "reflectance CSV needs sample_id and band columns");

  std::vector<double> wavelengths;
  std::size_t col = 1;
  for (; col < header.size(); ++col) {
    auto w = band_wavelength(header[col]);
    if (!w) break;
    wavelengths.push_back(*w);
  }
  if (wavelengths.empty())
    fail(ErrorCode::parse, "no band columns (expected headers like b400.0) after sample_id");
  const bool has_target = col < header.size();
  if (has_target && col + 1 != header.size())
    fail(ErrorCode::parse, "only one trailing target column may follow the band columns; found '" +
                               header[col + 1] + "'");

  BandGrid grid;
  grid.start_nm = round_nm(wavelengths.front());
  grid.count = wavelengths.size();
  // A single band has no spacing to infer from; 1 nm keeps the grid valid.
  grid.step_nm = wavelengths.size() > 1
                     ? round_nm((wavelengths.back() - wavelengths.front()) /
                                static_cast<double>(wavelengths.size() - 1))
                     : 1.0;
  if (!(grid.step_nm > 0.0)) fail(ErrorCode::parse, "band wavelengths must increase");
  for (std::size_t i = 0; i < wavelengths.size(); ++i) {
    if (std::abs(wavelengths[i] - grid.wavelength(i)) > 1e-6) {
      std::ostringstream msg;
      msg << "irregular band spacing at column '" << header[i + 1] << "': expected "
          << grid.wavelength(i) << " nm for step " << grid.step_nm << " nm";
      fail(ErrorCode::parse, msg.str());
    }
  }

  ReflectanceIngest result;
  result.dataset.name = std::move(name);
  result.dataset.grid = grid;
  if (has_target) result.dataset.target_name = header[col];
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != header.size()) {
      result.skipped_rows.push_back({row.line, "expected " + std::to_string(header.size()) +
                                                   " cells, found " + std::to_string(row.cells.size())});
      continue;
    }
    SpectralSample sample;
    sample.sample_id = row.cells[0];
    if (sample.sample_id.empty()) {
      result.skipped_rows.push_back({row.line, "empty sample_id"});
      continue;
    }
    bool ok = true;
    sample.reflectance.reserve(grid.count);
    for (std::size_t b = 0; b < grid.count; ++b) {
      auto v = csv::parse_number(row.cells[b + 1]);
      if (!v) {
        result.skipped_rows.push_back(
            {row.line, "non-numeric reflectance in column '" + header[b + 1] + "'"});
        ok = false;
        break;
      }
      sample.reflectance.push_back(*v);
    }
    if (!ok) continue;
    if (has_target && !row.cells.back().empty()) {
      auto t = csv::parse_number(row.cells.back());
      if (!t) {
        result.skipped_rows.push_back({row.line, "non-numeric target"});
        continue;
      }
      sample.target = *t;
    }
    if (!seen.insert(sample.sample_id).second)
      fail(ErrorCode::invalid_argument, "duplicate sample_id '" + sample.sample_id + "' on line " +
                                            std::to_string(row.line));
    result.dataset.samples.push_back(std::move(sample));
  }
  result.flagged_values = result.dataset.out_of_unit_range();
  return result;
}

}  // namespace specsel
