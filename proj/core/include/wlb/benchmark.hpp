#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "wlb/criteria.hpp"
#include "wlb/dataset.hpp"
#include "wlb/fidelity.hpp"

namespace wlb {

enum class BoundsKind { synthetic, real, rcv1_like };

struct SyntheticSpec {
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  Eigen::Index d_e = 0;   // nonzeros in the ground-truth coefficients
  double rho = 0.6;       // feature correlation, corr(x_i,x_j) = rho^|i-j|
  double snr = 10.0;      // ||X b_true|| / ||noise||, exact by construction
  std::uint64_t seed = 42;
  std::string name = "synt_custom";
};

// Named presets: synt_simple (30,60,3), synt_medium (50,100,5),
// synt_high (150,300,15), synt_hard (500,1000,50). `noisy` selects SNR=3
// instead of 10 and appends "_noisy" to the name.
SyntheticSpec synthetic_preset(const std::string& name, bool noisy = false,
                               std::uint64_t seed = 42);
bool is_synthetic_preset(const std::string& name);

// A tunable problem: data, per-coordinate penalty box [lam_min, lam_max],
// the CV criterion configuration, and the fidelity ladder. Immutable after
// construction; the CV split and the scaled-loss reference are precomputed.
class Benchmark {
 public:
  Benchmark(Dataset dataset, double lam_min, double lam_max,
            CvConfig criterion, FidelitySchedule fidelity, std::string name,
            std::optional<Eigen::VectorXd> beta_true = std::nullopt,
            std::optional<SyntheticSpec> spec = std::nullopt);

  const Dataset& dataset() const { return *dataset_; }
  Eigen::Index n() const { return dataset_->n(); }
  Eigen::Index d() const { return dataset_->d(); }
  double lam_min() const { return lam_min_; }
  double lam_max() const { return lam_max_; }
  const CvConfig& criterion() const { return criterion_; }
  const FidelitySchedule& fidelity() const { return fidelity_; }
  const std::string& name() const { return name_; }
  const std::optional<Eigen::VectorXd>& beta_true() const { return beta_true_; }
  const std::optional<SyntheticSpec>& spec() const { return spec_; }

  const CvSplit& split() const { return *split_; }

  // CV MSE of beta_true used directly as predictor; absent for real data.
  std::optional<double> reference_loss() const { return reference_loss_; }

 private:
  std::shared_ptr<const Dataset> dataset_;
  double lam_min_, lam_max_;
  CvConfig criterion_;
  FidelitySchedule fidelity_;
  std::string name_;
  std::optional<Eigen::VectorXd> beta_true_;
  std::optional<SyntheticSpec> spec_;
  std::shared_ptr<const CvSplit> split_;
  std::optional<double> reference_loss_;
};

Benchmark make_synthetic(const SyntheticSpec& spec);

// log(||X'y||_inf / n): smallest uniform penalty giving the all-zero fit.
double compute_lambda_max(const Dataset& ds);

// (lam_min, lam_max) with lam_min = lam_max - log(10^2 | 10^5 | 10^3) for
// synthetic | real | rcv1-like data.
std::pair<double, double> compute_bounds(const Dataset& ds, BoundsKind kind);

// Affine bijection between the penalty box and the optimizer cube [-1,1]^d.
// Out-of-range inputs are clipped to the boundary; `clipped`, when non-null,
// reports whether any coordinate was moved.
Eigen::VectorXd to_search_space(const Benchmark& bench,
                                const Eigen::VectorXd& lam,
                                bool* clipped = nullptr);
Eigen::VectorXd from_search_space(const Benchmark& bench,
                                  const Eigen::VectorXd& z,
                                  bool* clipped = nullptr);

// Heuristic first guess lam_j = lam_max - log 10, in search-space coords.
Eigen::VectorXd default_init(const Benchmark& bench);

}  // namespace wlb
