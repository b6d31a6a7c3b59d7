#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "specsel/spectra/band_grid.hpp"
#include "specsel/spectra/expression.hpp"

namespace specsel {

struct IndexDefinition {
  std::string name;
  Expression expression;
  std::vector<double> wavelengths_used;  // distinct, ascending

  static IndexDefinition make(std::string name, std::string_view formula);
};

/// Ordered, name-unique collection of index formulas.
///
/// Text form: one index per line, `NAME  expression`, where NAME is the first
/// whitespace-delimited token and the rest of the line is the formula. Lines
/// starting with `#` and blank lines are ignored.
class IndexRegistry {
 public:
  IndexRegistry() = default;

  /// 36 common vegetation indices (see default_registry_text()).
  static IndexRegistry standard();
  static IndexRegistry parse(std::string_view text);
  static IndexRegistry load(const std::filesystem::path& path);

  void add(IndexDefinition definition);

  const std::vector<IndexDefinition>& definitions() const noexcept { return definitions_; }
  std::size_t size() const noexcept { return definitions_.size(); }
  const IndexDefinition* find(std::string_view name) const;

  std::string to_text() const;

  /// Binds every formula to `grid`. Throws out_of_range naming the index and
  /// wavelength of the first terminal that does not resolve.
  std::vector<BoundExpression> bind(const BandGrid& grid) const;

 private:
  std::vector<IndexDefinition> definitions_;
};

std::string_view default_registry_text();

}  // namespace specsel
