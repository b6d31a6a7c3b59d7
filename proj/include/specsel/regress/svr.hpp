#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "specsel/matrix.hpp"

namespace specsel {

struct SvrHyperParams {
  double c = 1.0;        // penalty
  double gamma = 0.1;    // RBF width
  double epsilon = 0.1;  // tube half-width, in target units

  void validate() const;

  /// Lexicographic (c, gamma, epsilon); the grid-search tie-break order.
  friend auto operator<=>(const SvrHyperParams&, const SvrHyperParams&) = default;
};

struct SolverOptions {
  double tol = 1e-3;              // stop when the maximal KKT violation is <= tol
  std::size_t max_passes = 1000;  // one pass = 2n pair updates
};

/// Per-column z-scoring fitted on training rows. Constant columns keep scale 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const Matrix& x);
  Matrix apply(const Matrix& x) const;
};

struct SolverDiagnostics {
  bool converged = false;
  std::size_t iterations = 0;
  double max_violation = 0.0;
  double objective = 0.0;                 // dual objective (maximisation form)
  std::vector<double> objective_trace;    // dual objective after each pass
};

/// Solution of the epsilon-SVR dual
///
///   max  -1/2 (a - a*)' K (a - a*) - eps * sum(a + a*) + y' (a - a*)
///   s.t. sum(a - a*) = 0,  0 <= a, a* <= C
///
/// found by SMO with second-order working-set selection.
struct DualSolution {
  std::vector<double> alpha;       // 2n entries: a (first n) then a*
  std::vector<double> coef;        // a - a*, per sample
  double bias = 0.0;
  SolverDiagnostics diagnostics;
};

DualSolution solve_svr_dual(const Matrix& kernel, std::span<const double> y,
                            const SvrHyperParams& params, const SolverOptions& options = {});

/// Dual objective (maximisation form) of the stacked 2n variable vector.
double svr_dual_objective(const Matrix& kernel, std::span<const double> y,
                          std::span<const double> alpha, double epsilon);

Matrix squared_distances(const Matrix& x);
Matrix rbf_kernel(const Matrix& squared_dist, double gamma);

struct TrainedSvr {
  Matrix support;                          // standardized support rows
  std::vector<std::size_t> support_indices;  // rows of the training matrix
  std::vector<double> dual_coefficients;   // a - a*, per support row
  double bias = 0.0;
  SvrHyperParams params;
  Standardizer scaling;
  SolverDiagnostics diagnostics;

  std::size_t dimension() const noexcept { return scaling.mean.size(); }
};

/// Trains on standardized copies of `x`. Throws invalid_argument for n < 2,
/// numeric for non-finite inputs. A non-converged solve is returned with
/// diagnostics.converged == false.
TrainedSvr train_svr(const Matrix& x, std::span<const double> y, const SvrHyperParams& params,
                     const SolverOptions& options = {});

/// Same, reusing squared distances of the already standardized rows.
TrainedSvr train_svr_prepared(const Matrix& x_standardized, const Standardizer& scaling,
                              const Matrix& squared_dist, std::span<const double> y,
                              const SvrHyperParams& params, const SolverOptions& options = {});

/// Same, with the RBF kernel of the standardized rows already computed.
TrainedSvr train_svr_with_kernel(const Matrix& x_standardized, const Standardizer& scaling,
                                 const Matrix& kernel, std::span<const double> y,
                                 const SvrHyperParams& params, const SolverOptions& options = {});

std::vector<double> predict_svr(const TrainedSvr& model, const Matrix& x);

void require_finite(const Matrix& x, std::span<const double> y);

}  // namespace specsel
