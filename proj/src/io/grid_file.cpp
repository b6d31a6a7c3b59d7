#include "specsel/io/grid_file.hpp"

#include <fstream>

#include "specsel/csv.hpp"
#include "specsel/error.hpp"

namespace specsel {

std::vector<SvrHyperParams> parse_svr_grid(std::istream& in) {
  const auto rows = csv::read(in);
  if (rows.empty()) fail(ErrorCode::parse, "grid file is empty");
  const auto& header = rows.front().cells;
  auto column = [&](std::string_view name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    fail(ErrorCode::parse, "grid file header lacks column '" + std::string(name) + "'");
  };
  const std::size_t ci = column("c"), gi = column("gamma"), ei = column("epsilon");

  std::vector<SvrHyperParams> grid;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != header.size())
      fail(ErrorCode::parse, "grid file line " + std::to_string(row.line) + ": expected " +
                                 std::to_string(header.size()) + " cells");
    auto number = [&](std::size_t i) {
      auto v = csv::parse_number(row.cells[i]);
      if (!v)
        fail(ErrorCode::parse, "grid file line " + std::to_string(row.line) + ": '" +
                                   row.cells[i] + "' is not a number");
      return *v;
    };
    SvrHyperParams p{number(ci), number(gi), number(ei)};
    try {
      p.validate();
    } catch (const Error& e) {
      fail(ErrorCode::invalid_argument,
           "grid file line " + std::to_string(row.line) + ": " + e.what());
    }
    grid.push_back(p);
  }
  if (grid.empty()) fail(ErrorCode::parse, "grid file has no combinations");
  return grid;
}

std::vector<SvrHyperParams> load_svr_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open grid file " + path.string());
  return parse_svr_grid(in);
}

}  // namespace specsel
