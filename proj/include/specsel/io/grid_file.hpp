#pragma once

#include <filesystem>
#include <istream>
#include <vector>

#include "specsel/regress/svr.hpp"

namespace specsel {

/// SVR grid as CSV: a header naming the columns c, gamma and epsilon (any
/// order), then one combination per row. Rows keep file order.
std::vector<SvrHyperParams> parse_svr_grid(std::istream& in);
std::vector<SvrHyperParams> load_svr_grid(const std::filesystem::path& path);

}  // namespace specsel
