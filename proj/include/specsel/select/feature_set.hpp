#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace specsel {

enum class Direction { select, unselect };

/// Partition of the table's features into the two user-facing lists. Both
/// lists are kept in table column order.
struct FeatureSet {
  std::vector<std::string> selected;
  std::vector<std::string> unselected;

  static FeatureSet all_selected(std::span<const std::string> columns);
  static FeatureSet from_selected(std::span<const std::string> columns,
                                  std::span<const std::string> selected);

  bool is_selected(std::string_view name) const;

  /// Moves `name` to the other list. Throws not_found for unknown names and
  /// invalid_argument when it already sits on the target list.
  void move(std::string_view name, Direction direction, std::span<const std::string> columns);

  /// Throws invalid_argument unless the lists are disjoint and cover `columns`.
  void validate(std::span<const std::string> columns) const;

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;
};

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view text);

}  // namespace specsel
