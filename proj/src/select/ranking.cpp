#include "specsel/select/ranking.hpp"

#include <algorithm>
#include <numeric>

namespace specsel {

std::vector<double> ranking_score(std::span<const RankList> per_fold_ranks, std::size_t d,
                                  std::size_t k) {
  if (k < 1) fail(ErrorCode::invalid_argument, "ranking score needs k >= 1");
  if (d < 1) fail(ErrorCode::invalid_argument, "ranking score needs d >= 1");
  if (per_fold_ranks.size() != k)
    fail(ErrorCode::invalid_argument, "expected " + std::to_string(k) + " rank lists, got " +
                                          std::to_string(per_fold_ranks.size()));
  for (const auto& ranks : per_fold_ranks) {
    if (ranks.size() != d) fail(ErrorCode::invalid_argument, "rank list length differs from d");
    std::vector<bool> seen(d + 1, false);
    for (auto r : ranks) {
      if (r < 1 || r > d || seen[r])
        fail(ErrorCode::invalid_argument, "rank list is not a permutation of 1..d");
      seen[r] = true;
    }
  }
  std::vector<double> scores(d, 0.0);
  if (d == 1) {
    scores[0] = 1.0;
    return scores;
  }
  const double dd = static_cast<double>(d);
  for (std::size_t f = 0; f < d; ++f) {
    double sum = 0.0;
    for (const auto& ranks : per_fold_ranks)
      sum += ((dd + 1.0 - static_cast<double>(ranks[f])) - 1.0) / (dd - 1.0);
    scores[f] = sum / static_cast<double>(k);
  }
  return scores;
}

FeatureRanking rank_with_cv(const FeatureTable& table, std::size_t k, std::uint64_t seed,
                            const ModelConfig& config, const ProgressFn& progress) {
  check_cv_inputs(table, k);
  return rank_with_cv(table, make_fold_plan(table.n(), k, seed), config, progress);
}

FeatureRanking rank_with_cv(const FeatureTable& table, const FoldPlan& plan,
                            const ModelConfig& config, const ProgressFn& progress) {
  check_cv_inputs(table, plan.k);
  if (plan.n() != table.n()) fail(ErrorCode::invalid_argument, "fold plan does not match the table size");
  FeatureRanking ranking;
  ranking.feature_names = table.feature_names;
  ranking.d = table.d();
  ranking.k = plan.k;
  for (std::size_t fold = 0; fold < plan.k; ++fold) {
    const auto train = plan.train_indices(fold);
    const Matrix x_train = table.values.select_rows(train);
    const auto y_train = select<double>(table.target, train);
    const SvrHyperParams params = tune_svr(x_train, y_train, config, plan.seed);
    ranking.per_fold_ranks.push_back(
        rfe_rank(x_train, y_train, params, {true, config.rfe_criterion, config.solver}).ranks);
    if (progress) progress(static_cast<double>(fold + 1) / static_cast<double>(plan.k));
  }
  ranking.scores = ranking_score(ranking.per_fold_ranks, ranking.d, ranking.k);
  return ranking;
}

RankedEvaluation evaluate_and_rank(const FeatureTable& table, const FoldPlan& plan,
                                   const ModelConfig& config, const ProgressFn& progress) {
  if (config.kind != ModelKind::svr)
    fail(ErrorCode::invalid_argument, "feature ranking requires the SVR model");
  RankedEvaluation out;
  auto& ranking = out.ranking;
  ranking.feature_names = table.feature_names;
  ranking.d = table.d();
  ranking.k = plan.k;
  ranking.per_fold_ranks.resize(plan.k);
  out.report = kfold_cv(
      table, plan, config, progress,
      [&](std::size_t fold, const Matrix& x_train, std::span<const double> y_train,
          const SvrHyperParams& params) {
        ranking.per_fold_ranks[fold] = rfe_rank(x_train, y_train, params, {true, config.rfe_criterion, config.solver}).ranks;
      });
  ranking.scores = ranking_score(ranking.per_fold_ranks, ranking.d, ranking.k);
  out.report.feature_ranking_scores = ranking.scores;
  return out;
}

FeatureSet select_top(const FeatureRanking& ranking, std::size_t m) {
  if (m < 1 || m > ranking.d)
    fail(ErrorCode::invalid_argument, "selection size m must be in 1.." + std::to_string(ranking.d) +
                                          ", got " + std::to_string(m));
  std::vector<std::size_t> order(ranking.d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ranking.scores[a] > ranking.scores[b]; });
  std::vector<std::string> chosen;
  for (std::size_t i = 0; i < m; ++i) chosen.push_back(ranking.feature_names[order[i]]);
  return FeatureSet::from_selected(ranking.feature_names, chosen);
}

AutoSelection auto_select(const FeatureTable& table, std::size_t m, std::size_t k,
                          std::uint64_t seed, const ModelConfig& config,
                          const ProgressFn& progress) {
  table.validate();
  if (m < 1 || m > table.d())
    fail(ErrorCode::invalid_argument, "selection size m must be in 1.." + std::to_string(table.d()) +
                                          ", got " + std::to_string(m));
  AutoSelection out;
  out.ranking = rank_with_cv(table, k, seed, config, progress);
  out.feature_set = select_top(out.ranking, m);
  return out;
}

}  // namespace specsel
