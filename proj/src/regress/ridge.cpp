#include "specsel/regress/ridge.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "specsel/error.hpp"
#include "specsel/regress/svr.hpp"

namespace specsel {

RidgeModel train_ridge(const Matrix& x, std::span<const double> y, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    fail(ErrorCode::invalid_argument, "ridge lambda must be non-negative");
  if (x.rows() != y.size()) fail(ErrorCode::invalid_argument, "ridge: row count differs from target length");
  if (x.rows() < 2) fail(ErrorCode::invalid_argument, "ridge needs at least 2 rows");
  require_finite(x, y);

  const Standardizer scaling = Standardizer::fit(x);
  const Matrix z = scaling.apply(x);
  const auto n = static_cast<Eigen::Index>(z.rows());
  const auto d = static_cast<Eigen::Index>(z.cols());

  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= static_cast<double>(y.size());

  Eigen::MatrixXd Z(n, d);
  Eigen::VectorXd yc(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < d; ++c)
      Z(r, c) = z(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    yc(r) = y[static_cast<std::size_t>(r)] - y_mean;
  }
  Eigen::MatrixXd A = Z.transpose() * Z;
  A.diagonal().array() += lambda;
  const Eigen::VectorXd rhs = Z.transpose() * yc;
  // lambda = 0 may leave A singular (collinear or constant columns).
  const Eigen::VectorXd wz = lambda > 0.0 ? Eigen::VectorXd(A.ldlt().solve(rhs))
                                          : Eigen::VectorXd(A.completeOrthogonalDecomposition().solve(rhs));

  RidgeModel model;
  model.lambda = lambda;
  model.weights.resize(static_cast<std::size_t>(d));
  model.intercept = y_mean;
  for (std::size_t c = 0; c < model.weights.size(); ++c) {
    model.weights[c] = wz(static_cast<Eigen::Index>(c)) / scaling.scale[c];
    model.intercept -= model.weights[c] * scaling.mean[c];
  }
  return model;
}

std::vector<double> predict_ridge(const RidgeModel& model, const Matrix& x) {
  if (x.cols() != model.weights.size())
    fail(ErrorCode::invalid_argument, "ridge: expected " + std::to_string(model.weights.size()) +
                                          " feature columns, got " + std::to_string(x.cols()));
  std::vector<double> out(x.rows(), model.intercept);
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) out[r] += model.weights[c] * x(r, c);
  return out;
}

}  // namespace specsel
