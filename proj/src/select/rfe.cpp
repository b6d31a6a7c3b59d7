#include <cmath>
#include <limits>
#include <numeric>

#include "specsel/select/ranking.hpp"

namespace specsel {

namespace {

/// |W_full - W_without_f| for every column of the standardized support rows.
std::vector<double> dual_objective_change(const Matrix& support, std::span<const double> coef,
                                          double gamma) {
  const std::size_t m = support.rows();
  const std::size_t d = support.cols();
  std::vector<double> w_without(d, 0.0);
  double w_full = 0.0;
  std::vector<double> delta(d);
  // Diagonal terms have K = 1 with or without any feature and cancel out.
  for (std::size_t i = 0; i < m; ++i) {
    auto ri = support.row(i);
    for (std::size_t j = i + 1; j < m; ++j) {
      auto rj = support.row(j);
      double dist = 0.0;
      for (std::size_t f = 0; f < d; ++f) {
        delta[f] = (ri[f] - rj[f]) * (ri[f] - rj[f]);
        dist += delta[f];
      }
      const double bb = 2.0 * coef[i] * coef[j];
      w_full += bb * std::exp(-gamma * dist);
      for (std::size_t f = 0; f < d; ++f)
        w_without[f] += bb * std::exp(-gamma * std::max(dist - delta[f], 0.0));
    }
  }
  std::vector<double> out(d);
  for (std::size_t f = 0; f < d; ++f) out[f] = std::abs(0.5 * (w_without[f] - w_full));
  return out;
}

/// Sum over `rows` of the squared partial derivative of the fitted function
/// along each column, up to the common factor (2 gamma)^2.
std::vector<double> gradient_sensitivity(const Matrix& support, std::span<const double> coef,
                                         const Matrix& rows, double gamma) {
  const std::size_t d = support.cols();
  std::vector<double> out(d, 0.0), grad(d);
  for (std::size_t q = 0; q < rows.rows(); ++q) {
    auto rq = rows.row(q);
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t s = 0; s < support.rows(); ++s) {
      auto rs = support.row(s);
      double dist = 0.0;
      for (std::size_t f = 0; f < d; ++f) dist += (rq[f] - rs[f]) * (rq[f] - rs[f]);
      const double w = coef[s] * std::exp(-gamma * dist);
      for (std::size_t f = 0; f < d; ++f) grad[f] += w * (rs[f] - rq[f]);
    }
    for (std::size_t f = 0; f < d; ++f) out[f] += grad[f] * grad[f];
  }
  return out;
}

}  // namespace

RfeResult rfe_rank(const Matrix& x, std::span<const double> y, const SvrHyperParams& params,
                   const RfeOptions& options) {
  const std::size_t d = x.cols();
  if (d < 1) fail(ErrorCode::invalid_argument, "RFE needs at least one feature");

  RfeResult result;
  result.ranks.assign(d, 0);
  std::vector<std::size_t> remaining(d);
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});

  const bool by_gradient = options.criterion == RfeCriterion::gradient;
  const Matrix standardized = by_gradient && d > 1 ? Standardizer::fit(x).apply(x) : Matrix{};

  // Model of the fixed-coefficient variant, trained once on all columns.
  TrainedSvr initial;
  bool have_initial = false;

  while (!remaining.empty()) {
    std::size_t victim_pos = 0;
    if (remaining.size() > 1) {
      Matrix support;
      std::vector<double> coef;
      try {
        if (options.retrain_each_step || !have_initial) {
          TrainedSvr model = train_svr(x.select_cols(remaining), y, params, options.solver);
          if (!options.retrain_each_step) {
            initial = model;
            have_initial = true;
          }
          support = std::move(model.support);
          coef = std::move(model.dual_coefficients);
        } else {
          support = initial.support.select_cols(remaining);
          coef = initial.dual_coefficients;
        }
      } catch (const Error& e) {
        throw RfeError(e.code(), std::string("RFE training failed: ") + e.what(),
                       result.elimination_order);
      }
      const auto score =
          by_gradient
              ? gradient_sensitivity(support, coef, standardized.select_cols(remaining), params.gamma)
              : dual_objective_change(support, coef, params.gamma);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t p = 0; p < remaining.size(); ++p) {
        if (score[p] < best) {
          best = score[p];
          victim_pos = p;
        }
      }
    }
    const std::size_t victim = remaining[victim_pos];
    result.ranks[victim] = remaining.size();
    result.elimination_order.push_back(victim);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(victim_pos));
  }
  return result;
}

RfeResult rfe_rank(const Matrix& x, std::span<const double> y, const ModelConfig& config,
                   std::uint64_t seed, bool retrain_each_step) {
  const SvrHyperParams params = tune_svr(x, y, config, seed);
  return rfe_rank(x, y, params, {retrain_each_step, config.rfe_criterion, config.solver});
}

}  // namespace specsel
