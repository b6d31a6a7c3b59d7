#include "specsel/stats/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "specsel/error.hpp"
#include "specsel/stats/hcluster.hpp"

namespace specsel {

namespace {

struct Centered {
  std::vector<double> values;
  double norm = 0.0;
  bool constant = false;
};

Centered center(std::span<const double> x) {
  Centered c;
  c.constant = std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  c.values.resize(x.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    c.values[i] = x[i] - mean;
    ss += c.values[i] * c.values[i];
  }
  c.norm = std::sqrt(ss);
  return c;
}

PearsonResult correlate(const Centered& a, const Centered& b) {
  if (a.constant || b.constant || a.norm == 0.0 || b.norm == 0.0) return {0.0, true};
  double dot = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) dot += a.values[i] * b.values[i];
  return {std::clamp(dot / (a.norm * b.norm), -1.0, 1.0), false};
}

}  // namespace

PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    fail(ErrorCode::invalid_argument, "pearson: length mismatch (" + std::to_string(x.size()) +
                                          " vs " + std::to_string(y.size()) + ")");
  if (x.size() < 2) fail(ErrorCode::invalid_argument, "pearson: need at least 2 values");
  return correlate(center(x), center(y));
}

CorrelationMatrix correlation_matrix(const FeatureTable& table) {
  table.validate();
  const std::size_t d = table.d();
  const std::size_t m = d + 1;

  std::vector<Centered> cols;
  cols.reserve(m);
  for (std::size_t j = 0; j < d; ++j) cols.push_back(center(table.values.column(j)));
  cols.push_back(center(table.target));

  CorrelationMatrix out;
  out.labels = table.feature_names;
  out.labels.push_back(table.target_name);
  out.values = Matrix(m, m);
  out.degenerate.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    out.degenerate[a] = cols[a].constant || cols[a].norm == 0.0;
    for (std::size_t b = a; b < m; ++b) {
      const double r = correlate(cols[a], cols[b]).r;
      out.values(a, b) = r;
      out.values(b, a) = r;
    }
  }
  out.display_order = hcluster(out).leaf_order;
  return out;
}

}  // namespace specsel
