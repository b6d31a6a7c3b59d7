#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace specsel {

/// Deterministic k-fold assignment: indices are shuffled with a
/// platform-independent Fisher-Yates driven by mt19937_64(seed), then shuffled
/// position p goes to fold p % k. Fold sizes differ by at most one.
struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignments;  // fold id per sample

  std::size_t n() const noexcept { return assignments.size(); }
  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;
  std::vector<std::size_t> fold_sizes() const;

  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

/// Throws invalid_argument unless k >= 2 and n >= k.
FoldPlan make_fold_plan(std::size_t n, std::size_t k, std::uint64_t seed);

/// Uniform integer in [0, bound) by rejection; identical on every platform,
/// unlike std::uniform_int_distribution.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

}  // namespace specsel
