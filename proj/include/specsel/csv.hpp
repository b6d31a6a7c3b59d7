#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace specsel::csv {

struct Row {
  std::size_t line = 0;  // 1-based line number in the source
  std::vector<std::string> cells;
};

/// Reads comma-separated records. Fields are trimmed; double-quoted fields may
/// contain commas and "" escapes. Blank lines are skipped.
std::vector<Row> read(std::istream& in);

/// Strict decimal parse of a whole trimmed cell. Empty or trailing junk -> nullopt.
std::optional<double> parse_number(std::string_view cell);

/// Shortest text that round-trips to the same double.
std::string format_number(double value);

std::string escape(std::string_view cell);

}  // namespace specsel::csv
