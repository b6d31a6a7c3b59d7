#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specsel/matrix.hpp"
#include "specsel/regress/folds.hpp"
#include "specsel/regress/metrics.hpp"
#include "specsel/regress/svr.hpp"
#include "specsel/spectra/feature_table.hpp"

namespace specsel {

enum class ModelKind { svr, ridge };

/// How recursive feature elimination scores a column of a trained RBF SVR.
///  - gradient: mean squared partial derivative of the fitted function over
///    the training rows; the column with the smallest value goes first.
///  - dual_objective: |W - W(-f)| with W = -1/2 sum_ij b_i b_j K(x_i, x_j)
///    and column f dropped from the kernel distance, coefficients fixed.
enum class RfeCriterion { gradient, dual_objective };

struct ModelConfig {
  ModelKind kind = ModelKind::svr;
  /// Empty means default_svr_grid(d) for the columns being trained.
  std::vector<SvrHyperParams> svr_grid;
  std::vector<double> ridge_lambdas = {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};
  std::size_t inner_k = 3;
  SolverOptions solver;
  RfeCriterion rfe_criterion = RfeCriterion::gradient;  // used by the ranking routines
};

/// C in {0.1, 1, 10, 100} x epsilon in {0.01, 0.1, 0.5} x gamma in
/// {g0/4, g0, 4 g0}, g0 = 1 / d (standardized features have unit variance).
std::vector<SvrHyperParams> default_svr_grid(std::size_t d);

const std::vector<SvrHyperParams>& grid_or_default(const ModelConfig& config, std::size_t d,
                                                   std::vector<SvrHyperParams>& storage);

struct ComboScore {
  SvrHyperParams params;
  double mean_r2 = 0.0;
};

struct GridSearchResult {
  SvrHyperParams best;
  std::vector<ComboScore> scores;  // in grid order
};

/// Inner k-fold CV for every combination; picks the highest mean held-out R^2,
/// ties to the smaller (c, gamma, epsilon). Held-out folds with constant truth
/// are left out of the mean.
GridSearchResult grid_search(const Matrix& x, std::span<const double> y,
                             std::span<const SvrHyperParams> grid, std::size_t inner_k,
                             std::uint64_t seed, const SolverOptions& solver = {});

struct RidgeSearchResult {
  double best_lambda = 0.0;
  std::vector<std::pair<double, double>> scores;  // (lambda, mean R^2)
};

RidgeSearchResult ridge_search(const Matrix& x, std::span<const double> y,
                               std::span<const double> lambdas, std::size_t inner_k,
                               std::uint64_t seed);

struct FoldResult {
  std::size_t fold = 0;
  Metrics metrics;
  std::optional<SvrHyperParams> svr_params;
  std::optional<double> ridge_lambda;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

struct RegressionReport {
  ModelKind model = ModelKind::svr;
  std::vector<std::string> feature_names;
  std::string target_name;
  std::vector<FoldResult> per_fold;
  std::vector<double> truth;        // pooled held-out pairs, in sample order
  std::vector<double> predictions;
  Metrics aggregate;                // recomputed on the pooled pairs
  std::vector<double> feature_ranking_scores;  // per feature; empty if not ranked
  FoldPlan fold_plan;
  std::vector<std::string> warnings;
};

using ProgressFn = std::function<void(double)>;

/// Called once per outer SVR fold with the training split and the tuned
/// hyperparameters, before the fold's held-out predictions are made.
using FoldHook = std::function<void(std::size_t fold, const Matrix& x_train,
                                    std::span<const double> y_train, const SvrHyperParams& params)>;

/// Outer k-fold CV. Per fold: tune on the training split, refit with the
/// winner, predict the held-out split. Throws invalid_argument when n < 2k or
/// the target is constant.
RegressionReport kfold_cv(const FeatureTable& table, std::size_t k, std::uint64_t seed,
                          const ModelConfig& config, const ProgressFn& progress = {});

RegressionReport kfold_cv(const FeatureTable& table, const FoldPlan& plan,
                          const ModelConfig& config, const ProgressFn& progress = {},
                          const FoldHook& hook = {});

/// Hyperparameters the CV routine would pick for one training split.
SvrHyperParams tune_svr(const Matrix& x, std::span<const double> y, const ModelConfig& config,
                        std::uint64_t seed);

/// Shared precondition check of kfold_cv and the ranking routines.
void check_cv_inputs(const FeatureTable& table, std::size_t k);

}  // namespace specsel
