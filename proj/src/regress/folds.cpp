#include "specsel/regress/folds.hpp"

#include <numeric>

#include "specsel/error.hpp"

namespace specsel {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    const std::uint64_t v = rng();
    if (v < limit) return v % bound;
  }
}

FoldPlan make_fold_plan(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) fail(ErrorCode::invalid_argument, "fold count k must be at least 2");
  if (n < k)
    fail(ErrorCode::invalid_argument, "cannot split " + std::to_string(n) + " samples into " +
                                          std::to_string(k) + " folds");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.resize(n);
  for (std::size_t p = 0; p < n; ++p) plan.assignments[order[p]] = p % k;
  return plan;
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] != fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (auto f : assignments) ++sizes[f];
  return sizes;
}

}  // namespace specsel
