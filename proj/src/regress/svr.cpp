#include "specsel/regress/svr.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "specsel/error.hpp"

namespace specsel {

namespace {

constexpr double kTau = 1e-12;

}  // namespace

void SvrHyperParams::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) fail(ErrorCode::invalid_argument, "SVR C must be positive");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    fail(ErrorCode::invalid_argument, "SVR gamma must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    fail(ErrorCode::invalid_argument, "SVR epsilon must be non-negative");
}

Standardizer Standardizer::fit(const Matrix& x) {
  Standardizer s;
  const double n = static_cast<double>(x.rows());
  s.mean.assign(x.cols(), 0.0);
  s.scale.assign(x.cols(), 1.0);
  for (std::size_t c = 0; c < x.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) mean += x(r, c);
    mean /= n;
    double ss = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) ss += (x(r, c) - mean) * (x(r, c) - mean);
    const double sd = std::sqrt(ss / n);
    s.mean[c] = mean;
    s.scale[c] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& x) const {
  if (x.cols() != mean.size())
    fail(ErrorCode::invalid_argument, "expected " + std::to_string(mean.size()) +
                                          " feature columns, got " + std::to_string(x.cols()));
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = (x(r, c) - mean[c]) / scale[c];
  return out;
}

void require_finite(const Matrix& x, std::span<const double> y) {
  for (double v : x.data())
    if (!std::isfinite(v)) fail(ErrorCode::numeric, "non-finite feature value");
  for (double v : y)
    if (!std::isfinite(v)) fail(ErrorCode::numeric, "non-finite target value");
}

Matrix squared_distances(const Matrix& x) {
  Matrix out(x.rows(), x.rows());
  for (std::size_t a = 0; a < x.rows(); ++a) {
    auto ra = x.row(a);
    for (std::size_t b = a + 1; b < x.rows(); ++b) {
      auto rb = x.row(b);
      double ss = 0.0;
      for (std::size_t c = 0; c < ra.size(); ++c) ss += (ra[c] - rb[c]) * (ra[c] - rb[c]);
      out(a, b) = out(b, a) = ss;
    }
  }
  return out;
}

Matrix rbf_kernel(const Matrix& squared_dist, double gamma) {
  Matrix k(squared_dist.rows(), squared_dist.cols());
  for (std::size_t a = 0; a < k.rows(); ++a)
    for (std::size_t b = 0; b < k.cols(); ++b) k(a, b) = std::exp(-gamma * squared_dist(a, b));
  return k;
}

double svr_dual_objective(const Matrix& kernel, std::span<const double> y,
                          std::span<const double> alpha, double epsilon) {
  const std::size_t n = y.size();
  double quad = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double bi = alpha[i] - alpha[n + i];
    if (bi == 0.0) {
      lin -= epsilon * (alpha[i] + alpha[n + i]);
      continue;
    }
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += kernel(i, j) * (alpha[j] - alpha[n + j]);
    quad += bi * row;
    lin += y[i] * bi - epsilon * (alpha[i] + alpha[n + i]);
  }
  return -0.5 * quad + lin;
}

DualSolution solve_svr_dual(const Matrix& kernel, std::span<const double> y,
                            const SvrHyperParams& params, const SolverOptions& options) {
  params.validate();
  const std::size_t n = y.size();
  if (n < 2) fail(ErrorCode::invalid_argument, "SVR needs at least 2 training rows");
  if (kernel.rows() != n || kernel.cols() != n)
    fail(ErrorCode::invalid_argument, "kernel matrix does not match the target length");

  const std::size_t l = 2 * n;
  const double C = params.c;
  auto sign = [n](std::size_t t) { return t < n ? 1.0 : -1.0; };
  auto K = [&](std::size_t s, std::size_t t) { return kernel(s % n, t % n); };

  std::vector<double> alpha(l, 0.0);
  std::vector<double> p(l);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = params.epsilon - y[i];
    p[n + i] = params.epsilon + y[i];
  }
  std::vector<double> G = p;

  auto at_upper = [&](std::size_t t) { return alpha[t] >= C; };
  auto at_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };
  auto objective = [&] {
    double f = 0.0;
    for (std::size_t t = 0; t < l; ++t) f += alpha[t] * (G[t] + p[t]);
    return -0.5 * f;
  };

  const std::size_t max_iter = std::max<std::size_t>(1, options.max_passes) * l;
  DualSolution sol;
  auto& diag = sol.diagnostics;
  double violation = std::numeric_limits<double>::infinity();

  for (;;) {
    // Working set: i maximises the violation, j the second-order gain.
    double gmax = -std::numeric_limits<double>::infinity();
    double gmax2 = -std::numeric_limits<double>::infinity();
    std::size_t i = l, j = l;
    for (std::size_t t = 0; t < l; ++t) {
      if (sign(t) > 0) {
        if (!at_upper(t) && -G[t] >= gmax) {
          gmax = -G[t];
          i = t;
        }
      } else if (!at_lower(t) && G[t] >= gmax) {
        gmax = G[t];
        i = t;
      }
    }
    double best_gain = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < l; ++t) {
      double grad_diff = 0.0;
      if (sign(t) > 0) {
        if (at_lower(t)) continue;
        grad_diff = gmax + G[t];
        gmax2 = std::max(gmax2, G[t]);
      } else {
        if (at_upper(t)) continue;
        grad_diff = gmax - G[t];
        gmax2 = std::max(gmax2, -G[t]);
      }
      if (i < l && grad_diff > 0.0) {
        double quad = K(i, i) + K(t, t) - 2.0 * K(i, t);
        if (quad <= 0.0) quad = kTau;
        const double gain = -(grad_diff * grad_diff) / quad;
        if (gain <= best_gain) {
          best_gain = gain;
          j = t;
        }
      }
    }
    violation = gmax + gmax2;
    if (violation <= options.tol || i == l || j == l) {
      diag.converged = true;
      break;
    }
    if (diag.iterations >= max_iter) break;
    ++diag.iterations;

    const double old_i = alpha[i], old_j = alpha[j];
    const double yi = sign(i), yj = sign(j);
    const double Qij = yi * yj * K(i, j);
    if (yi != yj) {
      double quad = K(i, i) + K(j, j) + 2.0 * Qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = K(i, i) + K(j, j) - 2.0 * Qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
    const auto ki = kernel.row(i % n);
    const auto kj = kernel.row(j % n);
    const double wi = yi * di, wj = yj * dj;
    for (std::size_t s = 0; s < n; ++s) {
      const double u = wi * ki[s] + wj * kj[s];
      G[s] += u;
      G[n + s] -= u;
    }

    if (diag.iterations % l == 0) {
      const double w = objective();
      assert(diag.objective_trace.empty() ||
             w >= diag.objective_trace.back() - 1e-9 * (1.0 + std::abs(w)));
      diag.objective_trace.push_back(w);
    }
  }

  diag.max_violation = std::max(violation, 0.0);
  diag.objective = objective();
  diag.objective_trace.push_back(diag.objective);

  // Bias from the free variables, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < l; ++t) {
    const double yG = sign(t) * G[t];
    if (at_upper(t)) {
      if (sign(t) < 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else if (at_lower(t)) {
      if (sign(t) > 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else {
      ++free_count;
      free_sum += yG;
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (ub + lb) / 2.0;
  sol.bias = -rho;

  sol.coef.resize(n);
  for (std::size_t s = 0; s < n; ++s) sol.coef[s] = alpha[s] - alpha[n + s];
  sol.alpha = std::move(alpha);
  return sol;
}

TrainedSvr train_svr_prepared(const Matrix& x_standardized, const Standardizer& scaling,
                              const Matrix& squared_dist, std::span<const double> y,
                              const SvrHyperParams& params, const SolverOptions& options) {
  return train_svr_with_kernel(x_standardized, scaling, rbf_kernel(squared_dist, params.gamma), y,
                               params, options);
}

TrainedSvr train_svr_with_kernel(const Matrix& x_standardized, const Standardizer& scaling,
                                 const Matrix& kernel, std::span<const double> y,
                                 const SvrHyperParams& params, const SolverOptions& options) {
  DualSolution sol = solve_svr_dual(kernel, y, params, options);

  TrainedSvr model;
  model.params = params;
  model.scaling = scaling;
  model.bias = sol.bias;
  model.diagnostics = std::move(sol.diagnostics);
  for (std::size_t s = 0; s < y.size(); ++s) {
    if (sol.coef[s] != 0.0) {
      model.support_indices.push_back(s);
      model.dual_coefficients.push_back(sol.coef[s]);
    }
  }
  model.support = x_standardized.select_rows(model.support_indices);
  return model;
}

TrainedSvr train_svr(const Matrix& x, std::span<const double> y, const SvrHyperParams& params,
                     const SolverOptions& options) {
  params.validate();
  if (x.rows() != y.size()) fail(ErrorCode::invalid_argument, "SVR: row count differs from target length");
  if (x.rows() < 2) fail(ErrorCode::invalid_argument, "SVR needs at least 2 training rows");
  require_finite(x, y);
  const Standardizer scaling = Standardizer::fit(x);
  const Matrix xs = scaling.apply(x);
  return train_svr_prepared(xs, scaling, squared_distances(xs), y, params, options);
}

std::vector<double> predict_svr(const TrainedSvr& model, const Matrix& x) {
  const Matrix q = model.scaling.apply(x);
  std::vector<double> out(q.rows(), model.bias);
  for (std::size_t r = 0; r < q.rows(); ++r) {
    auto row = q.row(r);
    double sum = 0.0;
    for (std::size_t s = 0; s < model.support.rows(); ++s) {
      auto sv = model.support.row(s);
      double ss = 0.0;
      for (std::size_t c = 0; c < row.size(); ++c) ss += (row[c] - sv[c]) * (row[c] - sv[c]);
      sum += model.dual_coefficients[s] * std::exp(-model.params.gamma * ss);
    }
    out[r] += sum;
  }
  return out;
}

}  // namespace specsel
