#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "wlb/dataset.hpp"

namespace wlb {

// Per-feature penalties on natural-log scale: the effective weight applied
// to |beta_j| is exp(lam[j]).
struct PenaltyVector {
  Eigen::VectorXd lam;

  static PenaltyVector uniform(Eigen::Index d, double value) {
    return {Eigen::VectorXd::Constant(d, value)};
  }
  Eigen::Index size() const { return lam.size(); }
  Eigen::VectorXd weights() const { return lam.array().exp(); }
};

struct SolverConfig {
  // Stop once duality gap <= tol * ||y||^2 / n.
  double tol = 1e-4;
  int max_passes = 10000;
  // Initial coefficients; zeros when absent.
  std::optional<Eigen::VectorXd> warm_start;
};

struct WLassoSolution {
  Eigen::VectorXd beta;
  std::vector<Eigen::Index> support;  // indices with beta_j != 0, ascending
  double gap = 0.0;                   // duality gap at termination
  double primal = 0.0;                // objective at termination
  int n_passes = 0;                   // full coordinate cycles executed
};

double soft_threshold(double x, double threshold);

// (1/2n)||y - Xb||^2 + sum_j exp(lam_j) |b_j|
double primal_objective(const Dataset& ds, const PenaltyVector& pen,
                        const Eigen::VectorXd& beta);

// Nonnegative duality gap from the scaled-residual dual point.
double duality_gap(const Dataset& ds, const PenaltyVector& pen,
                   const Eigen::VectorXd& beta);

// Cyclic coordinate descent with incremental residual updates. The gap is
// checked on passes 1, 11, 21, ... and on the final pass, so a warm start
// already at the solution exits after a single pass.
WLassoSolution solve_wlasso(const Dataset& ds, const PenaltyVector& pen,
                            const SolverConfig& cfg = {});

// Work metric for fidelity-aware cost accounting: one unit per coordinate
// visit, i.e. n_passes * n * d.
std::uint64_t cd_cost_meter(const WLassoSolution& sol, const Dataset& ds);

// Smallest uniform penalty with an all-zero solution:
// log(max_j |x_j . y| / n).
double lambda_max(const Dataset& ds);

}  // namespace wlb
