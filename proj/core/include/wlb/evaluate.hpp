#pragma once

#include <cstdint>
#include <vector>

#include "wlb/benchmark.hpp"
#include "wlb/fidelity.hpp"

namespace wlb {

// One outer-objective evaluation as persisted to trajectory files.
// `loss` is the scaled criterion when the benchmark carries a reference
// (synthetic data), otherwise equal to raw_loss.
struct EvalRecord {
  Eigen::VectorXd z;          // search-space point in [-1,1]^d
  FidelitySpec fidelity;
  double loss = 0.0;
  double raw_loss = 0.0;
  std::uint64_t cost_units = 0;  // summed cd_cost_meter of the fold solves
  std::int64_t wall_ns = 0;
  std::uint64_t seed = 0;        // run seed, constant within a run
  std::int64_t ordinal = 0;      // strictly increasing within a run
};

// Counts, times, and records evaluations against one benchmark. Not
// thread-safe; one Evaluator per run.
class Evaluator {
 public:
  Evaluator(const Benchmark& bench, std::uint64_t seed)
      : bench_(&bench), seed_(seed) {}

  const Benchmark& benchmark() const { return *bench_; }

  // Evaluate a search-space point (clipped into the box if needed).
  const EvalRecord& evaluate_z(const Eigen::VectorXd& z,
                               const FidelitySpec& fid,
                               WarmState* warm = nullptr);

  // Evaluate a penalty-space point; recorded at its search-space image.
  const EvalRecord& evaluate_lambda(const Eigen::VectorXd& lam,
                                    const FidelitySpec& fid,
                                    WarmState* warm = nullptr);

  // Evaluate at an explicit solver tolerance (grid baselines and line
  // searches drive the tolerance directly); recorded as the continuous
  // fidelity coordinate of that tolerance.
  const EvalRecord& evaluate_lambda_at_tol(const Eigen::VectorXd& lam,
                                           double tol,
                                           WarmState* warm = nullptr);

  const std::vector<EvalRecord>& trajectory() const { return trajectory_; }
  std::vector<EvalRecord> take_trajectory() { return std::move(trajectory_); }

  // Record with the lowest loss so far; nullptr before any evaluation.
  const EvalRecord* best() const;

  std::size_t n_evals() const { return trajectory_.size(); }
  std::uint64_t total_cost() const { return total_cost_; }

 private:
  const EvalRecord& record(const Eigen::VectorXd& z,
                           const Eigen::VectorXd& lam, const FidelitySpec& fid,
                           double tol, WarmState* warm);

  const Benchmark* bench_;
  std::uint64_t seed_;
  std::vector<EvalRecord> trajectory_;
  std::uint64_t total_cost_ = 0;
};

}  // namespace wlb
