#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wlb/dataset.hpp"
#include "wlb/solver.hpp"

namespace wlb {

struct CvConfig {
  int k_folds = 5;
  std::uint64_t fold_seed = 0;  // deterministic partition key
  double tol = 1e-4;            // inner-solver tolerance (fidelity knob)
};

struct CriterionValue {
  double loss = 0.0;              // mean of per_fold
  Eigen::VectorXd per_fold;       // validation MSE per fold
  std::uint64_t cost = 0;         // summed cd_cost_meter over fold solves
  std::optional<double> scaled;   // loss / reference loss, when a reference exists
};

struct FoldIndices {
  std::vector<Eigen::Index> train;
  std::vector<Eigen::Index> val;
};

// Deterministic K-fold partition: Fisher-Yates shuffle of 0..n-1 keyed by
// fold_seed, then contiguous validation blocks of size floor(n/K) or
// ceil(n/K). Indices are returned sorted within each side.
std::vector<FoldIndices> make_folds(Eigen::Index n, const CvConfig& cfg);

// Materialized train/validation datasets for one partition, built once and
// reused for every penalty vector evaluated on the same benchmark.
class CvSplit {
 public:
  CvSplit(const Dataset& ds, const CvConfig& cfg);

  int k() const { return static_cast<int>(folds_.size()); }
  const Dataset& train(int fold) const { return folds_[fold].train; }
  const Dataset& val(int fold) const { return folds_[fold].val; }
  const CvConfig& config() const { return cfg_; }

 private:
  struct Fold {
    Dataset train;
    Dataset val;
  };
  CvConfig cfg_;
  std::vector<Fold> folds_;
};

// Per-fold warm starts carried across successive evaluations (grid walks,
// line searches). Never shared between folds.
struct WarmState {
  std::vector<Eigen::VectorXd> fold_beta;
};

struct FoldSolve {
  WLassoSolution sol;
  double val_mse = 0.0;
  std::uint64_t cost = 0;
};

// Inner solve on one training fold plus validation MSE of the fitted
// coefficients. Shared by cv_loss and the hypergradient so both see
// identical arithmetic.
FoldSolve solve_fold(const Dataset& train, const Dataset& val,
                     const PenaltyVector& pen, double tol,
                     const Eigen::VectorXd* warm = nullptr);

// K-fold cross-validation MSE of the weighted-Lasso fit at `pen`.
CriterionValue cv_loss(const CvSplit& split, const PenaltyVector& pen,
                       double tol, WarmState* warm = nullptr);

// Convenience overload that builds the split for one-off evaluations.
CriterionValue cv_loss(const Dataset& ds, const PenaltyVector& pen,
                       const CvConfig& cfg);

// CV MSE of a fixed coefficient vector used directly as the predictor on
// each validation fold (no inner solve). Basis of the scaled-loss reference.
double fixed_beta_cv_mse(const CvSplit& split, const Eigen::VectorXd& beta);

}  // namespace wlb
