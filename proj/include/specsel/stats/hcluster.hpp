#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "specsel/matrix.hpp"

namespace specsel {

struct CorrelationMatrix;

/// One agglomeration step. Leaves are clusters 0..n-1; the cluster formed by
/// merge i gets id n + i. Invariant: a < b.
struct Merge {
  std::size_t a = 0;
  std::size_t b = 0;
  double distance = 0.0;
  std::size_t size = 0;  // leaves in the merged cluster
};

struct Dendrogram {
  std::size_t leaf_count = 0;
  std::vector<Merge> merges;             // non-decreasing distance
  std::vector<std::size_t> leaf_order;   // left-to-right, lower-id child first
  std::optional<double> cut_distance;

  /// Flat cluster label per leaf when cutting at `cut` (merges with distance
  /// <= cut are applied). Labels are numbered in leaf_order appearance.
  std::vector<std::size_t> flat_clusters(double cut) const;
};

/// Average-linkage agglomerative clustering over a symmetric distance matrix.
/// Ties in the minimum linkage go to the smallest (a, b) id pair.
Dendrogram hcluster_distances(const Matrix& distances);

/// Clusters the labels of a correlation matrix by the euclidean distance
/// between their correlation-profile rows.
Dendrogram hcluster(const CorrelationMatrix& matrix);

/// Euclidean distance between every pair of rows.
Matrix row_distances(const Matrix& m);

}  // namespace specsel
