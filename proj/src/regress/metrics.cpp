#include "specsel/regress/metrics.hpp"

#include <cmath>
#include <limits>

#include "specsel/error.hpp"

namespace specsel {

namespace {

void check_lengths(std::span<const double> truth, std::span<const double> pred) {
  if (truth.size() != pred.size())
    fail(ErrorCode::invalid_argument, "metric inputs differ in length");
}

double total_sum_of_squares(std::span<const double> truth) {
  double mean = 0.0;
  for (double t : truth) mean += t;
  mean /= static_cast<double>(truth.size());
  double ss = 0.0;
  for (double t : truth) ss += (t - mean) * (t - mean);
  return ss;
}

double residual_sum_of_squares(std::span<const double> truth, std::span<const double> pred) {
  double ss = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) ss += (truth[i] - pred[i]) * (truth[i] - pred[i]);
  return ss;
}

}  // namespace

double r2(std::span<const double> truth, std::span<const double> pred) {
  check_lengths(truth, pred);
  if (truth.size() < 2) fail(ErrorCode::invalid_argument, "r2 needs at least 2 values");
  const double ss_tot = total_sum_of_squares(truth);
  if (ss_tot == 0.0) fail(ErrorCode::invalid_argument, "r2 undefined: truth has zero variance");
  return 1.0 - residual_sum_of_squares(truth, pred) / ss_tot;
}

double rmse(std::span<const double> truth, std::span<const double> pred) {
  check_lengths(truth, pred);
  if (truth.empty()) fail(ErrorCode::invalid_argument, "rmse of empty input");
  return std::sqrt(residual_sum_of_squares(truth, pred) / static_cast<double>(truth.size()));
}

Metrics compute_metrics(std::span<const double> truth, std::span<const double> pred) {
  Metrics m;
  m.rmse = rmse(truth, pred);
  const double ss_tot = truth.size() >= 2 ? total_sum_of_squares(truth) : 0.0;
  m.r2 = ss_tot > 0.0 ? 1.0 - residual_sum_of_squares(truth, pred) / ss_tot
                      : std::numeric_limits<double>::quiet_NaN();
  return m;
}

}  // namespace specsel
