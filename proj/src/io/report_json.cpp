#include "specsel/io/report_json.hpp"

#include <cmath>
#include <limits>

#include "specsel/error.hpp"

namespace specsel {

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_nan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

std::string_view to_string(ModelKind kind) { return kind == ModelKind::svr ? "svr" : "ridge"; }

ModelKind parse_model_kind(std::string_view text) {
  if (text == "svr") return ModelKind::svr;
  if (text == "ridge") return ModelKind::ridge;
  fail(ErrorCode::invalid_argument, "unknown model '" + std::string(text) + "'");
}

std::string_view to_string(RfeCriterion criterion) {
  return criterion == RfeCriterion::gradient ? "gradient" : "dual";
}

RfeCriterion parse_rfe_criterion(std::string_view text) {
  if (text == "gradient") return RfeCriterion::gradient;
  if (text == "dual") return RfeCriterion::dual_objective;
  fail(ErrorCode::invalid_argument,
       "unknown RFE criterion '" + std::string(text) + "' (expected gradient or dual)");
}

void to_json(json& j, const SvrHyperParams& p) {
  j = json{{"c", p.c}, {"gamma", p.gamma}, {"epsilon", p.epsilon}};
}
void from_json(const json& j, SvrHyperParams& p) {
  p.c = j.at("c").get<double>();
  p.gamma = j.at("gamma").get<double>();
  p.epsilon = j.at("epsilon").get<double>();
}

void to_json(json& j, const Metrics& m) { j = json{{"r2", number_or_null(m.r2)}, {"rmse", m.rmse}}; }
void from_json(const json& j, Metrics& m) {
  m.r2 = number_or_nan(j.at("r2"));
  m.rmse = j.at("rmse").get<double>();
}

void to_json(json& j, const FoldPlan& p) {
  j = json{{"k", p.k}, {"seed", p.seed}, {"assignments", p.assignments}};
}
void from_json(const json& j, FoldPlan& p) {
  p.k = j.at("k").get<std::size_t>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.assignments = j.at("assignments").get<std::vector<std::size_t>>();
}

void to_json(json& j, const FoldResult& f) {
  j = json{{"fold", f.fold},
           {"metrics", f.metrics},
           {"train_size", f.train_size},
           {"test_size", f.test_size}};
  if (f.svr_params) j["svr_params"] = *f.svr_params;
  if (f.ridge_lambda) j["ridge_lambda"] = *f.ridge_lambda;
}
void from_json(const json& j, FoldResult& f) {
  f.fold = j.at("fold").get<std::size_t>();
  f.metrics = j.at("metrics").get<Metrics>();
  f.train_size = j.at("train_size").get<std::size_t>();
  f.test_size = j.at("test_size").get<std::size_t>();
  if (j.contains("svr_params")) f.svr_params = j.at("svr_params").get<SvrHyperParams>();
  if (j.contains("ridge_lambda")) f.ridge_lambda = j.at("ridge_lambda").get<double>();
}

void to_json(json& j, const RegressionReport& r) {
  json scores = json::array();
  for (std::size_t f = 0; f < r.feature_ranking_scores.size(); ++f)
    scores.push_back({{"feature", r.feature_names.at(f)}, {"score", r.feature_ranking_scores[f]}});
  j = json{{"model", to_string(r.model)},
           {"features", r.feature_names},
           {"target", r.target_name},
           {"per_fold", r.per_fold},
           {"pooled", {{"truth", r.truth}, {"predictions", r.predictions}}},
           {"aggregate", r.aggregate},
           {"feature_ranking_scores", scores},
           {"fold_plan", r.fold_plan},
           {"warnings", r.warnings}};
}
void from_json(const json& j, RegressionReport& r) {
  r.model = parse_model_kind(j.at("model").get<std::string>());
  r.feature_names = j.at("features").get<std::vector<std::string>>();
  r.target_name = j.at("target").get<std::string>();
  r.per_fold = j.at("per_fold").get<std::vector<FoldResult>>();
  r.truth = j.at("pooled").at("truth").get<std::vector<double>>();
  r.predictions = j.at("pooled").at("predictions").get<std::vector<double>>();
  r.aggregate = j.at("aggregate").get<Metrics>();
  r.feature_ranking_scores.clear();
  for (const auto& s : j.at("feature_ranking_scores")) r.feature_ranking_scores.push_back(s.at("score").get<double>());
  r.fold_plan = j.at("fold_plan").get<FoldPlan>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
}

void to_json(json& j, const FeatureRanking& r) {
  j = json{{"features", r.feature_names},
           {"per_fold_ranks", r.per_fold_ranks},
           {"scores", r.scores},
           {"d", r.d},
           {"k", r.k}};
}
void from_json(const json& j, FeatureRanking& r) {
  r.feature_names = j.at("features").get<std::vector<std::string>>();
  r.per_fold_ranks = j.at("per_fold_ranks").get<std::vector<RankList>>();
  r.scores = j.at("scores").get<std::vector<double>>();
  r.d = j.at("d").get<std::size_t>();
  r.k = j.at("k").get<std::size_t>();
}

void to_json(json& j, const ComparisonRow& c) {
  j = json{{"subset", c.subset},         {"full", c.full}, {"subset_size", c.subset_size},
           {"total_size", c.total_size}, {"k", c.k},       {"seed", c.seed}};
}
void from_json(const json& j, ComparisonRow& c) {
  c.subset = j.at("subset").get<Metrics>();
  c.full = j.at("full").get<Metrics>();
  c.subset_size = j.at("subset_size").get<std::size_t>();
  c.total_size = j.at("total_size").get<std::size_t>();
  c.k = j.at("k").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
}

void to_json(json& j, const FeatureSet& s) {
  j = json{{"selected", s.selected}, {"unselected", s.unselected}};
}
void from_json(const json& j, FeatureSet& s) {
  s.selected = j.at("selected").get<std::vector<std::string>>();
  s.unselected = j.at("unselected").get<std::vector<std::string>>();
}

void to_json(json& j, const CorrelationMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.values.rows(); ++r) {
    auto row = m.values.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j = json{{"labels", m.labels},
           {"values", rows},
           {"degenerate", m.degenerate},
           {"display_order", m.display_order}};
}

void to_json(json& j, const Dendrogram& d) {
  json merges = json::array();
  for (const auto& m : d.merges)
    merges.push_back({{"a", m.a}, {"b", m.b}, {"distance", m.distance}, {"size", m.size}});
  j = json{{"leaf_count", d.leaf_count}, {"merges", merges}, {"leaf_order", d.leaf_order}};
  if (d.cut_distance) j["cut_distance"] = *d.cut_distance;
}

void to_json(json& j, const Histogram& h) {
  j = json{{"edges", h.edges}, {"counts", h.counts}, {"below", h.below}, {"above", h.above}};
}

void to_json(json& j, const DensityEstimate& e) {
  j = json{{"axes", e.axes}, {"densities", e.densities}, {"bandwidth", e.bandwidth}};
}

void to_json(json& j, const WavelengthHistogram& h) {
  j = json{{"edges", h.edges},
           {"counts", h.counts},
           {"overflow", h.overflow},
           {"underflow", h.underflow},
           {"overflow_wavelengths", h.overflow_wavelengths},
           {"missing_features", h.missing_features},
           {"total_references", h.total_references}};
}

void to_json(json& j, const BandGrid& g) {
  j = json{{"start_nm", g.start_nm}, {"step_nm", g.step_nm}, {"count", g.count}};
}

json registry_json(const IndexRegistry& registry, const BandGrid& grid) {
  json out = json::array();
  for (const auto& def : registry.definitions()) {
    json bands = json::array();
    for (double w : def.wavelengths_used) bands.push_back(nearest_band(grid, w));
    out.push_back({{"name", def.name},
                   {"expression", def.expression.to_string()},
                   {"wavelengths", def.wavelengths_used},
                   {"bands", bands}});
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace specsel
