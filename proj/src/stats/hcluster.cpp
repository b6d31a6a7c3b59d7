#include "specsel/stats/hcluster.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "specsel/error.hpp"
#include "specsel/stats/correlation.hpp"

namespace specsel {

Matrix row_distances(const Matrix& m) {
  Matrix out(m.rows(), m.rows());
  for (std::size_t a = 0; a < m.rows(); ++a) {
    for (std::size_t b = a + 1; b < m.rows(); ++b) {
      double ss = 0.0;
      for (std::size_t c = 0; c < m.cols(); ++c) {
        const double diff = m(a, c) - m(b, c);
        ss += diff * diff;
      }
      out(a, b) = out(b, a) = std::sqrt(ss);
    }
  }
  return out;
}

Dendrogram hcluster_distances(const Matrix& distances) {
  const std::size_t n = distances.rows();
  if (n < 2 || distances.cols() != n)
    fail(ErrorCode::invalid_argument, "hierarchical clustering needs a square matrix of >= 2 labels");

  Dendrogram tree;
  tree.leaf_count = n;

  // Linkage between active clusters, keyed by id. Ids only grow, so iterating
  // the map visits pairs in lexicographic (a, b) order.
  std::map<std::size_t, std::size_t> sizes;
  std::map<std::size_t, std::map<std::size_t, double>> link;
  for (std::size_t a = 0; a < n; ++a) {
    sizes[a] = 1;
    for (std::size_t b = a + 1; b < n; ++b) link[a][b] = distances(a, b);
  }
  auto linkage = [&](std::size_t a, std::size_t b) {
    return a < b ? link[a][b] : link[b][a];
  };

  std::vector<std::pair<std::size_t, std::size_t>> children;
  for (std::size_t step = 0; step + 1 < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_a = 0, best_b = 0;
    for (const auto& [a, row] : link) {
      for (const auto& [b, dist] : row) {
        if (dist < best) {
          best = dist;
          best_a = a;
          best_b = b;
        }
      }
    }
    const std::size_t merged = n + step;
    const std::size_t na = sizes[best_a], nb = sizes[best_b];
    for (const auto& [k, size] : sizes) {
      if (k == best_a || k == best_b) continue;
      const double d = (static_cast<double>(na) * linkage(best_a, k) +
                        static_cast<double>(nb) * linkage(best_b, k)) /
                       static_cast<double>(na + nb);
      link[k][merged] = d;
    }
    for (auto it = link.begin(); it != link.end(); ++it) {
      it->second.erase(best_a);
      it->second.erase(best_b);
    }
    link.erase(best_a);
    link.erase(best_b);
    sizes.erase(best_a);
    sizes.erase(best_b);
    sizes[merged] = na + nb;
    tree.merges.push_back({best_a, best_b, best, na + nb});
    children.emplace_back(best_a, best_b);
  }

  const std::size_t root = 2 * n - 2;
  std::vector<std::size_t> stack{root};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    if (id < n) {
      tree.leaf_order.push_back(id);
      continue;
    }
    const auto [lo, hi] = children[id - n];
    stack.push_back(hi);
    stack.push_back(lo);
  }
  return tree;
}

Dendrogram hcluster(const CorrelationMatrix& matrix) {
  return hcluster_distances(row_distances(matrix.values));
}

std::vector<std::size_t> Dendrogram::flat_clusters(double cut) const {
  const std::size_t n = leaf_count;
  std::vector<std::size_t> parent(2 * n, 0);
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < merges.size(); ++i) {
    if (merges[i].distance > cut) break;
    parent[find(merges[i].a)] = n + i;
    parent[find(merges[i].b)] = n + i;
  }
  std::map<std::size_t, std::size_t> label_of_root;
  std::vector<std::size_t> labels(n);
  for (auto leaf : leaf_order) {
    const auto root = find(leaf);
    auto [it, inserted] = label_of_root.emplace(root, label_of_root.size());
    labels[leaf] = it->second;
  }
  return labels;
}

}  // namespace specsel
