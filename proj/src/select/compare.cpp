#include "specsel/select/compare.hpp"

#include "specsel/error.hpp"

namespace specsel {

Comparison compare_subset_vs_full(const FeatureTable& table, const FeatureSet& feature_set,
                                  std::size_t k, std::uint64_t seed, const ModelConfig& config,
                                  const ProgressFn& progress) {
  if (feature_set.selected.empty())
    fail(ErrorCode::invalid_argument, "no features selected for the subset model");
  feature_set.validate(table.feature_names);
  check_cv_inputs(table, k);
  const FoldPlan plan = make_fold_plan(table.n(), k, seed);

  auto half = [&](double offset) -> ProgressFn {
    if (!progress) return {};
    return [&, offset](double p) { progress(offset + 0.5 * p); };
  };
  Comparison out;
  out.subset_report = kfold_cv(table.with_features(feature_set.selected), plan, config, half(0.0));
  out.full_report = kfold_cv(table, plan, config, half(0.5));
  out.row.subset = out.subset_report.aggregate;
  out.row.full = out.full_report.aggregate;
  out.row.subset_size = feature_set.selected.size();
  out.row.total_size = table.d();
  out.row.k = k;
  out.row.seed = seed;
  return out;
}

}  // namespace specsel
