#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "specsel/spectra/band_grid.hpp"

namespace specsel {

/// Arithmetic formula over reflectance terminals.
///
/// Grammar (whitespace insignificant):
///
///     expr    := term   (('+' | '-') term)*
///     term    := unary  (('*' | '/') unary)*
///     unary   := '-' unary | primary
///     primary := NUMBER | 'R' NUMBER | '(' expr ')'
///
/// `R800` is the reflectance at 800 nm. The typographic operators U+2212,
/// U+00D7 and U+00F7 are accepted as aliases of '-', '*' and '/'.
///
/// Nodes live in a flat arena so expressions are cheap value types.
class Expression {
 public:
  enum class Kind : std::uint8_t { constant, reflectance, negate, add, subtract, multiply, divide };

  struct Node {
    Kind kind = Kind::constant;
    double value = 0.0;  // constant value, or wavelength in nm for reflectance
    std::int32_t lhs = -1;
    std::int32_t rhs = -1;
  };

  static Expression parse(std::string_view text);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::int32_t root() const noexcept { return root_; }

  /// Distinct wavelengths of the R terminals, ascending.
  std::vector<double> wavelengths() const;
  /// Every R terminal occurrence in left-to-right order.
  std::vector<double> terminal_wavelengths() const;

  /// Canonical text with the minimum parentheses needed to re-parse into the
  /// same tree.
  std::string to_string() const;

  /// Structural equality of the trees, independent of arena layout.
  bool same_tree(const Expression& other) const;

  /// Evaluates with reflectance looked up per node index (see BoundExpression).
  /// Returns nullopt on division by zero or a non-finite intermediate.
  template <typename Lookup>
  std::optional<double> evaluate(Lookup&& reflectance_of_node) const {
    return eval_node(root_, reflectance_of_node);
  }

 private:
  friend class ExpressionParser;

  template <typename Lookup>
  std::optional<double> eval_node(std::int32_t id, Lookup& lookup) const;

  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

template <typename Lookup>
std::optional<double> Expression::eval_node(std::int32_t id, Lookup& lookup) const {
  const Node& n = nodes_[static_cast<std::size_t>(id)];
  switch (n.kind) {
    case Kind::constant: return n.value;
    case Kind::reflectance: {
      double v = lookup(id);
      if (!std::isfinite(v)) return std::nullopt;
      return v;
    }
    case Kind::negate: {
      auto v = eval_node(n.lhs, lookup);
      if (!v) return std::nullopt;
      return -*v;
    }
    default: break;
  }
  auto a = eval_node(n.lhs, lookup);
  if (!a) return std::nullopt;
  auto b = eval_node(n.rhs, lookup);
  if (!b) return std::nullopt;
  double r = 0.0;
  switch (n.kind) {
    case Kind::add: r = *a + *b; break;
    case Kind::subtract: r = *a - *b; break;
    case Kind::multiply: r = *a * *b; break;
    case Kind::divide:
      if (*b == 0.0) return std::nullopt;
      r = *a / *b;
      break;
    default: return std::nullopt;
  }
  if (!std::isfinite(r)) return std::nullopt;
  return r;
}

/// Expression with every R terminal resolved to a band index of one grid.
class BoundExpression {
 public:
  /// Throws out_of_range naming the first wavelength that does not bind.
  BoundExpression(Expression expression, const BandGrid& grid);

  std::optional<double> evaluate(std::span<const double> reflectance) const;

  const Expression& expression() const noexcept { return expression_; }
  /// Band index per arena node; meaningful only for reflectance nodes.
  const std::vector<std::size_t>& node_bands() const noexcept { return node_bands_; }

 private:
  Expression expression_;
  std::vector<std::size_t> node_bands_;
};

}  // namespace specsel
