#pragma once

#include <cstdint>
#include <vector>

#include "wlb/benchmark.hpp"
#include "wlb/evaluate.hpp"

namespace wlb {

// Scalar penalty grid on the natural-log scale (evenly spaced lambda,
// i.e. log-spaced effective weights).
struct GridSpec {
  int n_points = 100;
  double lo = 0.0;
  double hi = 0.0;

  static GridSpec for_benchmark(const Benchmark& bench, int n_points = 100) {
    return {n_points, bench.lam_min(), bench.lam_max()};
  }
  std::vector<double> points() const;  // ascending
};

struct BaselineResult {
  Eigen::VectorXd best_lam;             // penalty-space argmin
  double best_loss = 0.0;               // scaled where applicable
  std::vector<EvalRecord> trajectory;
  Eigen::VectorXd refit_beta;           // solution on the full dataset at best_lam
};

// Scalar-lambda grid search with CV scoring, warm-started along the grid.
BaselineResult lasso_cv(const Benchmark& bench, const GridSpec& grid);

// Iteratively reweighted variant: at each grid point g, n_reweight rounds of
// lam_j = g - log(|beta_j| + eps) starting from the plain-Lasso solution,
// then CV-score the final weights. Approximates the concave penalty
// exp(g) * log(|beta_j| + eps) by successive linearization.
BaselineResult adaptive_lasso_cv(const Benchmark& bench, const GridSpec& grid,
                                 int n_reweight = 5, double eps = 1e-3);

struct ArmijoRule {
  double initial_step = 1.0;
  double shrink = 0.5;
  double slope = 1e-4;
  int max_halvings = 30;
};

struct SparseHoConfig {
  Eigen::VectorXd init_z;       // search space; empty selects default_init
  int max_outer_iters = 100;
  int restart_period = 20;      // multi-start leg length, in outer iterations
  ArmijoRule step_rule;
  double inner_tol = 1e-4;
};

struct HypergradResult {
  double loss = 0.0;            // raw CV loss (mean over folds)
  Eigen::VectorXd grad;         // d(loss)/d(lambda), zeros off-support
  std::uint64_t cost = 0;
  bool regularized = false;     // normal-equation solve needed a ridge bump
  bool support_unstable = false;  // folds disagreed across re-solves
};

// Hypergradient of the CV loss via implicit differentiation restricted to
// each fold's active set.
HypergradResult sparse_ho_gradient(const Benchmark& bench,
                                   const PenaltyVector& pen,
                                   const SparseHoConfig& cfg);

// Projected gradient descent on the per-feature penalties with Armijo
// backtracking; stops on iteration budget or step collapse.
BaselineResult sparse_ho(const Benchmark& bench, const SparseHoConfig& cfg);

// Repeated sparse_ho legs: the first from default_init, later ones from a
// uniform scalar restart drawn from the seeded stream; total evaluation
// count is capped by `budget`.
BaselineResult multi_start_sparse_ho(const Benchmark& bench,
                                     const SparseHoConfig& cfg, int budget,
                                     std::uint64_t seed);

}  // namespace wlb
