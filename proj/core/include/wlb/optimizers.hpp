#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "wlb/benchmark.hpp"
#include "wlb/evaluate.hpp"
#include "wlb/rng.hpp"

namespace wlb {

// Batch ask/tell contract every sampling optimizer implements; drivers below
// connect it to a Benchmark, but the interface itself is benchmark-agnostic
// (tests run it on synthetic functions directly).
class AskTellOptimizer {
 public:
  virtual ~AskTellOptimizer() = default;

  virtual Eigen::Index dimension() const = 0;

  // Next batch of points in [-1,1]^d.
  virtual std::vector<Eigen::VectorXd> ask() = 0;

  // Report losses for the last ask() batch, in the same order.
  virtual void tell(const std::vector<Eigen::VectorXd>& points,
                    const std::vector<double>& losses) = 0;
};

class RandomSearch final : public AskTellOptimizer {
 public:
  RandomSearch(Eigen::Index d, std::uint64_t seed) : d_(d), stream_(seed) {}

  Eigen::Index dimension() const override { return d_; }
  std::vector<Eigen::VectorXd> ask() override;
  void tell(const std::vector<Eigen::VectorXd>&,
            const std::vector<double>&) override {}

 private:
  Eigen::Index d_;
  RandomStream stream_;
};

struct CmaesConfig {
  int population = 20;
  double sigma0 = 0.1;
  Eigen::VectorXd mean0;     // empty selects the zero vector
  int resample_limit = 10;   // bound handling: resample, then clip
  double eigen_floor = 1e-14;
};

// (mu/mu_w, lambda)-CMA-ES with rank-one + rank-mu covariance updates and
// cumulative step-size adaptation, standard parameterization, mu = pop/2.
// Out-of-box samples are resampled up to resample_limit times, then the
// clipped point is returned for evaluation while the raw sample still drives
// the state update.
class CmaEs final : public AskTellOptimizer {
 public:
  CmaEs(Eigen::Index d, const CmaesConfig& cfg, std::uint64_t seed);
  ~CmaEs() override;

  Eigen::Index dimension() const override;
  std::vector<Eigen::VectorXd> ask() override;
  void tell(const std::vector<Eigen::VectorXd>& points,
            const std::vector<double>& losses) override;

  const Eigen::VectorXd& mean() const;
  double sigma() const;
  int generation() const;
  double min_eigenvalue() const;
  bool eigen_floor_hit() const;  // covariance degeneration was clipped

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct HyperbandPlan {
  int eta = 3;
  double max_resource = 27.0;  // R; resource r maps to fidelity l = ln r / ln R
  bool seed_default_init = true;   // plant the heuristic init in bracket 0
  bool warm_across_rungs = true;   // surviving configs keep fold warm starts

  struct Rung {
    int n_configs;
    double resource;
  };
  struct Bracket {
    int s;
    std::vector<Rung> rungs;
  };
  // Successive-halving schedule, most exploratory bracket first.
  std::vector<Bracket> brackets() const;
};

// Drivers: run a method against a benchmark and return its trajectory.
std::vector<EvalRecord> random_search(const Benchmark& bench, int budget,
                                      const FidelitySpec& fidelity,
                                      std::uint64_t seed);
std::vector<EvalRecord> cmaes(const Benchmark& bench, int budget,
                              const CmaesConfig& cfg, std::uint64_t seed);
std::vector<EvalRecord> hyperband(const Benchmark& bench,
                                  const HyperbandPlan& plan,
                                  std::uint64_t seed);

}  // namespace wlb
