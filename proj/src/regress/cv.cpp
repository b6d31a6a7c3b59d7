#include "specsel/regress/cv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "specsel/error.hpp"
#include "specsel/parallel.hpp"
#include "specsel/regress/ridge.hpp"

namespace specsel {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double mean_of_valid(const std::vector<double>& fold_scores) {
  double sum = 0.0;
  std::size_t count = 0;
  for (double s : fold_scores) {
    if (std::isnan(s)) continue;
    sum += s;
    ++count;
  }
  return count > 0 ? sum / static_cast<double>(count) : kNegInf;
}

Matrix cross_squared_distances(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ra = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      auto rb = b.row(j);
      double ss = 0.0;
      for (std::size_t c = 0; c < ra.size(); ++c) ss += (ra[c] - rb[c]) * (ra[c] - rb[c]);
      out(i, j) = ss;
    }
  }
  return out;
}

/// Training split of one inner fold, with distances precomputed once and
/// reused by every hyperparameter combination.
struct PreparedSplit {
  std::vector<double> y_train;
  std::vector<double> y_test;
  Matrix train_sqd;
  Matrix cross_sqd;  // test x train
};

PreparedSplit prepare_split(const Matrix& x, std::span<const double> y, const FoldPlan& plan,
                            std::size_t fold) {
  const auto train = plan.train_indices(fold);
  const auto test = plan.test_indices(fold);
  const Matrix x_train = x.select_rows(train);
  const Standardizer scaling = Standardizer::fit(x_train);
  const Matrix xs_train = scaling.apply(x_train);
  const Matrix xs_test = scaling.apply(x.select_rows(test));
  PreparedSplit split;
  split.y_train = select<double>(y, train);
  split.y_test = select<double>(y, test);
  split.train_sqd = squared_distances(xs_train);
  split.cross_sqd = cross_squared_distances(xs_test, xs_train);
  return split;
}

double held_out_r2(const PreparedSplit& split, const Matrix& kernel, const SvrHyperParams& params,
                   const SolverOptions& solver) {
  const DualSolution sol = solve_svr_dual(kernel, split.y_train, params, solver);
  std::vector<double> pred(split.y_test.size(), sol.bias);
  for (std::size_t q = 0; q < pred.size(); ++q)
    for (std::size_t s = 0; s < sol.coef.size(); ++s)
      if (sol.coef[s] != 0.0) pred[q] += sol.coef[s] * std::exp(-params.gamma * split.cross_sqd(q, s));
  return compute_metrics(split.y_test, pred).r2;
}

}  // namespace

std::vector<SvrHyperParams> default_svr_grid(std::size_t d) {
  const double g0 = 1.0 / static_cast<double>(std::max<std::size_t>(d, 1));
  std::vector<SvrHyperParams> grid;
  for (double c : {0.1, 1.0, 10.0, 100.0})
    for (double eps : {0.01, 0.1, 0.5})
      for (double gamma : {g0 / 4.0, g0, 4.0 * g0}) grid.push_back({c, gamma, eps});
  return grid;
}

const std::vector<SvrHyperParams>& grid_or_default(const ModelConfig& config, std::size_t d,
                                                   std::vector<SvrHyperParams>& storage) {
  if (!config.svr_grid.empty()) return config.svr_grid;
  storage = default_svr_grid(d);
  return storage;
}

GridSearchResult grid_search(const Matrix& x, std::span<const double> y,
                             std::span<const SvrHyperParams> grid, std::size_t inner_k,
                             std::uint64_t seed, const SolverOptions& solver) {
  if (grid.empty()) fail(ErrorCode::invalid_argument, "hyperparameter grid is empty");
  for (const auto& p : grid) p.validate();
  if (x.rows() != y.size()) fail(ErrorCode::invalid_argument, "grid search: row count differs from target length");
  if (x.rows() < inner_k)
    fail(ErrorCode::invalid_argument, "grid search: " + std::to_string(x.rows()) +
                                          " rows cannot fill " + std::to_string(inner_k) + " inner folds");
  require_finite(x, y);

  GridSearchResult result;
  if (grid.size() == 1) {
    result.best = grid.front();
    result.scores.push_back({grid.front(), std::numeric_limits<double>::quiet_NaN()});
    return result;
  }

  const FoldPlan plan = make_fold_plan(x.rows(), inner_k, seed);
  // Group combinations by gamma so each inner fold builds one kernel per gamma.
  std::map<double, std::vector<std::size_t>> by_gamma;
  for (std::size_t g = 0; g < grid.size(); ++g) by_gamma[grid[g].gamma].push_back(g);

  std::vector<std::vector<double>> fold_scores(grid.size(), std::vector<double>(inner_k));
  for (std::size_t fold = 0; fold < inner_k; ++fold) {
    const PreparedSplit split = prepare_split(x, y, plan, fold);
    for (const auto& [gamma, combos] : by_gamma) {
      const Matrix kernel = rbf_kernel(split.train_sqd, gamma);
      parallel_for(combos.size(), [&](std::size_t i) {
        const std::size_t g = combos[i];
        fold_scores[g][fold] = held_out_r2(split, kernel, grid[g], solver);
      });
    }
  }

  double best_score = kNegInf;
  bool have_best = false;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double score = mean_of_valid(fold_scores[g]);
    result.scores.push_back({grid[g], score});
    if (!have_best || score > best_score || (score == best_score && grid[g] < result.best)) {
      best_score = score;
      result.best = grid[g];
      have_best = true;
    }
  }
  return result;
}

RidgeSearchResult ridge_search(const Matrix& x, std::span<const double> y,
                               std::span<const double> lambdas, std::size_t inner_k,
                               std::uint64_t seed) {
  if (lambdas.empty()) fail(ErrorCode::invalid_argument, "ridge lambda list is empty");
  RidgeSearchResult result;
  if (lambdas.size() == 1) {
    result.best_lambda = lambdas.front();
    result.scores.emplace_back(lambdas.front(), std::numeric_limits<double>::quiet_NaN());
    return result;
  }
  if (x.rows() < inner_k)
    fail(ErrorCode::invalid_argument, "ridge search: too few rows for the inner folds");
  const FoldPlan plan = make_fold_plan(x.rows(), inner_k, seed);
  double best_score = kNegInf;
  bool have_best = false;
  for (double lambda : lambdas) {
    std::vector<double> scores;
    for (std::size_t fold = 0; fold < inner_k; ++fold) {
      const auto train = plan.train_indices(fold);
      const auto test = plan.test_indices(fold);
      const auto model = train_ridge(x.select_rows(train), select<double>(y, train), lambda);
      scores.push_back(compute_metrics(select<double>(y, test), predict_ridge(model, x.select_rows(test))).r2);
    }
    const double score = mean_of_valid(scores);
    result.scores.emplace_back(lambda, score);
    if (!have_best || score > best_score || (score == best_score && lambda < result.best_lambda)) {
      best_score = score;
      result.best_lambda = lambda;
      have_best = true;
    }
  }
  return result;
}

SvrHyperParams tune_svr(const Matrix& x, std::span<const double> y, const ModelConfig& config,
                        std::uint64_t seed) {
  std::vector<SvrHyperParams> storage;
  const auto& grid = grid_or_default(config, x.cols(), storage);
  return grid_search(x, y, grid, config.inner_k, seed, config.solver).best;
}

void check_cv_inputs(const FeatureTable& table, std::size_t k) {
  table.validate();
  if (k < 2) fail(ErrorCode::invalid_argument, "fold count k must be at least 2");
  if (table.n() < 2 * k)
    fail(ErrorCode::invalid_argument, "k-fold CV needs n >= 2k (n = " + std::to_string(table.n()) +
                                          ", k = " + std::to_string(k) + ")");
  if (std::all_of(table.target.begin(), table.target.end(),
                  [&](double v) { return v == table.target.front(); }))
    fail(ErrorCode::invalid_argument, "target '" + table.target_name + "' has zero variance");
  require_finite(table.values, table.target);
}

RegressionReport kfold_cv(const FeatureTable& table, std::size_t k, std::uint64_t seed,
                          const ModelConfig& config, const ProgressFn& progress) {
  check_cv_inputs(table, k);
  return kfold_cv(table, make_fold_plan(table.n(), k, seed), config, progress);
}

RegressionReport kfold_cv(const FeatureTable& table, const FoldPlan& plan,
                          const ModelConfig& config, const ProgressFn& progress,
                          const FoldHook& hook) {
  check_cv_inputs(table, plan.k);
  if (plan.n() != table.n()) fail(ErrorCode::invalid_argument, "fold plan does not match the table size");

  RegressionReport report;
  report.model = config.kind;
  report.feature_names = table.feature_names;
  report.target_name = table.target_name;
  report.fold_plan = plan;
  report.truth = table.target;
  report.predictions.assign(table.n(), 0.0);

  for (std::size_t fold = 0; fold < plan.k; ++fold) {
    const auto train = plan.train_indices(fold);
    const auto test = plan.test_indices(fold);
    const Matrix x_train = table.values.select_rows(train);
    const auto y_train = select<double>(table.target, train);
    const Matrix x_test = table.values.select_rows(test);

    FoldResult fr;
    fr.fold = fold;
    fr.train_size = train.size();
    fr.test_size = test.size();
    std::vector<double> pred;
    if (config.kind == ModelKind::svr) {
      const SvrHyperParams params = tune_svr(x_train, y_train, config, plan.seed);
      if (hook) hook(fold, x_train, y_train, params);
      const TrainedSvr model = train_svr(x_train, y_train, params, config.solver);
      if (!model.diagnostics.converged)
        report.warnings.push_back("fold " + std::to_string(fold) + ": SMO stopped after " +
                                  std::to_string(model.diagnostics.iterations) +
                                  " iterations without converging");
      pred = predict_svr(model, x_test);
      fr.svr_params = params;
    } else {
      const double lambda =
          ridge_search(x_train, y_train, config.ridge_lambdas, config.inner_k, plan.seed).best_lambda;
      pred = predict_ridge(train_ridge(x_train, y_train, lambda), x_test);
      fr.ridge_lambda = lambda;
    }
    for (std::size_t i = 0; i < test.size(); ++i) report.predictions[test[i]] = pred[i];
    fr.metrics = compute_metrics(select<double>(table.target, test), pred);
    report.per_fold.push_back(fr);
    if (progress) progress(static_cast<double>(fold + 1) / static_cast<double>(plan.k));
  }
  report.aggregate = compute_metrics(report.truth, report.predictions);
  return report;
}

}  // namespace specsel
