#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "specsel/error.hpp"
#include "specsel/regress/cv.hpp"
#include "specsel/select/feature_set.hpp"
#include "specsel/spectra/feature_table.hpp"

namespace specsel {

/// rank[f] in 1..d per fold, 1 = most important.
using RankList = std::vector<std::size_t>;

struct FeatureRanking {
  std::vector<std::string> feature_names;
  std::vector<RankList> per_fold_ranks;  // k lists
  std::vector<double> scores;            // per feature, in [0, 1]
  std::size_t d = 0;
  std::size_t k = 0;
};

/// Fold-averaged normalised rank:
///
///   score_f = (1/k) * sum_i ((d + 1 - r_i) - 1) / (d - 1)
///
/// so a feature ranked first in every fold scores 1 and one ranked last
/// scores 0. With d = 1 the lone feature scores 1. Throws invalid_argument
/// unless there are k >= 1 lists, each a permutation of 1..d.
std::vector<double> ranking_score(std::span<const RankList> per_fold_ranks, std::size_t d,
                                  std::size_t k);

struct RfeOptions {
  bool retrain_each_step = true;
  RfeCriterion criterion = RfeCriterion::gradient;
  SolverOptions solver;
};

struct RfeResult {
  RankList ranks;                          // per feature
  std::vector<std::size_t> elimination_order;  // first eliminated first
};

/// Raised when a training inside RFE fails; carries the features eliminated so
/// far.
class RfeError : public Error {
 public:
  RfeError(ErrorCode code, const std::string& message, std::vector<std::size_t> partial)
      : Error(code, message), partial_(std::move(partial)) {}
  const std::vector<std::size_t>& partial_elimination() const noexcept { return partial_; }

 private:
  std::vector<std::size_t> partial_;
};

/// Kernel recursive feature elimination over an RBF epsilon-SVR. Each step
/// scores the remaining columns with `options.criterion` and removes the
/// lowest; ties go to the lower column index. The last survivor gets rank 1.
/// Without retraining, the initial model's support rows and coefficients are
/// reused with the eliminated columns dropped from the kernel.
RfeResult rfe_rank(const Matrix& x, std::span<const double> y, const SvrHyperParams& params,
                   const RfeOptions& options = {});

/// Tunes hyperparameters with the config's grid search first.
RfeResult rfe_rank(const Matrix& x, std::span<const double> y, const ModelConfig& config,
                   std::uint64_t seed, bool retrain_each_step = true);

/// Per outer fold: grid search on the training split, then RFE with the
/// chosen hyperparameters. Scores combine the k rank lists.
FeatureRanking rank_with_cv(const FeatureTable& table, std::size_t k, std::uint64_t seed,
                            const ModelConfig& config, const ProgressFn& progress = {});
FeatureRanking rank_with_cv(const FeatureTable& table, const FoldPlan& plan,
                            const ModelConfig& config, const ProgressFn& progress = {});

/// Cross-validated evaluation and ranking sharing one grid search per fold.
/// The report equals kfold_cv on the same plan, with ranking scores attached.
struct RankedEvaluation {
  RegressionReport report;
  FeatureRanking ranking;
};
RankedEvaluation evaluate_and_rank(const FeatureTable& table, const FoldPlan& plan,
                                   const ModelConfig& config, const ProgressFn& progress = {});

/// The m best-scoring features; ties keep table column order.
FeatureSet select_top(const FeatureRanking& ranking, std::size_t m);

struct AutoSelection {
  FeatureSet feature_set;
  FeatureRanking ranking;
};

/// Throws invalid_argument unless 1 <= m <= d.
AutoSelection auto_select(const FeatureTable& table, std::size_t m, std::size_t k,
                          std::uint64_t seed, const ModelConfig& config,
                          const ProgressFn& progress = {});

}  // namespace specsel
