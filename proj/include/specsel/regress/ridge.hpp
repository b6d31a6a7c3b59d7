#pragma once

#include <span>
#include <vector>

#include "specsel/matrix.hpp"

namespace specsel {

struct RidgeModel {
  std::vector<double> weights;  // original feature scale
  double intercept = 0.0;
  double lambda = 0.0;
};

/// Least squares on z-scored features with penalty lambda * |w_z|^2; the
/// intercept is not penalised. Weights are mapped back to the input scale.
RidgeModel train_ridge(const Matrix& x, std::span<const double> y, double lambda);

std::vector<double> predict_ridge(const RidgeModel& model, const Matrix& x);

}  // namespace specsel
