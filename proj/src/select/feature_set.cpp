#include "specsel/select/feature_set.hpp"

#include <algorithm>
#include <set>

#include "specsel/error.hpp"

namespace specsel {

FeatureSet FeatureSet::all_selected(std::span<const std::string> columns) {
  return {{columns.begin(), columns.end()}, {}};
}

FeatureSet FeatureSet::from_selected(std::span<const std::string> columns,
                                     std::span<const std::string> selected) {
  std::set<std::string, std::less<>> chosen(selected.begin(), selected.end());
  for (const auto& name : chosen)
    if (std::find(columns.begin(), columns.end(), name) == columns.end())
      fail(ErrorCode::not_found, "unknown feature '" + name + "'");
  FeatureSet fs;
  for (const auto& c : columns) (chosen.count(c) ? fs.selected : fs.unselected).push_back(c);
  return fs;
}

bool FeatureSet::is_selected(std::string_view name) const {
  return std::find(selected.begin(), selected.end(), name) != selected.end();
}

void FeatureSet::move(std::string_view name, Direction direction,
                      std::span<const std::string> columns) {
  if (std::find(columns.begin(), columns.end(), name) == columns.end())
    fail(ErrorCode::not_found, "unknown feature '" + std::string(name) + "'");
  auto& from = direction == Direction::select ? unselected : selected;
  auto it = std::find(from.begin(), from.end(), name);
  if (it == from.end())
    fail(ErrorCode::invalid_argument, "feature '" + std::string(name) + "' is already " +
                                          (direction == Direction::select ? "selected" : "unselected"));
  from.erase(it);
  auto& to = direction == Direction::select ? selected : unselected;
  to.emplace_back(name);
  auto rank = [&](const std::string& s) { return std::find(columns.begin(), columns.end(), s) - columns.begin(); };
  std::stable_sort(to.begin(), to.end(), [&](const auto& a, const auto& b) { return rank(a) < rank(b); });
}

void FeatureSet::validate(std::span<const std::string> columns) const {
  std::set<std::string, std::less<>> seen;
  for (const auto* list : {&selected, &unselected})
    for (const auto& name : *list)
      if (!seen.insert(name).second)
        fail(ErrorCode::invalid_argument, "feature '" + name + "' appears twice in the feature set");
  std::set<std::string, std::less<>> all(columns.begin(), columns.end());
  if (seen != all) fail(ErrorCode::invalid_argument, "feature set does not cover the table columns");
}

std::string_view to_string(Direction d) { return d == Direction::select ? "select" : "unselect"; }

Direction parse_direction(std::string_view text) {
  if (text == "select") return Direction::select;
  if (text == "unselect") return Direction::unselect;
  fail(ErrorCode::invalid_argument, "direction must be 'select' or 'unselect'");
}

}  // namespace specsel
