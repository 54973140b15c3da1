#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wlb/benchmark.hpp"
#include "wlb/evaluate.hpp"

namespace wlb {

// ---- Manifests --------------------------------------------------------

// JSON description of a benchmark, sufficient to rebuild it bit-identically
// (synthetic: generator spec + seed; real: registry name resolved against
// the data directory).
std::string benchmark_manifest_json(const Benchmark& bench);
void write_benchmark_manifest(const Benchmark& bench,
                              const std::filesystem::path& path);

// Accepts a preset name ("synt_simple", "synt_medium_noisy", ...), a
// registry name ("leukemia", ...), or a path to a manifest JSON file.
Benchmark resolve_benchmark(const std::string& name_or_path,
                            const std::filesystem::path& data_dir);

struct ExperimentManifest {
  std::string benchmark;  // anything resolve_benchmark accepts
  std::string method;     // see run_experiment
  int budget = 1000;
  int repetitions = 30;
  std::uint64_t base_seed = 42;  // replicate r runs with base_seed + r
  FidelitySpec fidelity = FidelitySpec::at_level(4);

  // Method-specific knobs (defaults match the paper-aligned configuration).
  int grid_points = 100;     // lasso-cv, adaptive-lasso-cv
  int n_reweight = 5;        // adaptive-lasso-cv
  double eps = 1e-3;         // adaptive-lasso-cv
  int population = 20;       // cmaes
  double sigma0 = 0.1;       // cmaes
  int eta = 3;               // hyperband
  double max_resource = 27;  // hyperband
  int max_outer_iters = 100; // sparse-ho
  int restart_period = 20;   // multi-start-sparse-ho
  double inner_tol = 1e-4;   // sparse-ho family
};

ExperimentManifest parse_experiment_manifest(const std::string& json_text);
ExperimentManifest read_experiment_manifest(const std::filesystem::path& path);
std::string experiment_manifest_json(const ExperimentManifest& manifest);

// ---- Trajectory persistence -------------------------------------------

// JSON-lines trajectory: one meta line, then one EvalRecord per line.
struct TrajectoryFile {
  std::string benchmark;
  std::string method;
  std::uint64_t seed = 0;
  std::vector<EvalRecord> records;
};

void write_trajectory(const TrajectoryFile& traj,
                      const std::filesystem::path& path);
TrajectoryFile read_trajectory(const std::filesystem::path& path);

// ---- Experiment runner --------------------------------------------------

struct RunResult {
  std::vector<std::filesystem::path> trajectory_files;
  std::filesystem::path summary_file;
  std::vector<double> best_losses;      // per successful repetition
  double mean_best = 0.0;
  double std_best = 0.0;                // sample std; 0 for a single rep
  std::vector<int> failed_repetitions;  // preserved partial results
};

// Methods: random-search | cmaes | hyperband | lasso-cv | adaptive-lasso-cv
// | sparse-ho | multi-start-sparse-ho. Writes one trajectory file per
// repetition plus a summary JSON, all atomically (tmp + rename).
RunResult run_experiment(const ExperimentManifest& manifest,
                         const std::filesystem::path& out_dir,
                         const std::filesystem::path& data_dir = {});

// ---- Analysis -----------------------------------------------------------

// Pearson correlation of losses across the five discrete fidelity levels on
// n_probes uniform points. Entries for constant columns are NaN.
Eigen::MatrixXd fidelity_correlation(const Benchmark& bench, int n_probes,
                                     std::uint64_t seed);

// Mean highest-fidelity evaluation cost (cd_cost_meter units) over n_probes
// uniform points — the divisor turning cost_units into "equivalent
// highest-fidelity evaluations".
double mean_highest_fidelity_cost(const Benchmark& bench, int n_probes,
                                  std::uint64_t seed);

enum class PlotAxis { ordinal, cost_units, wall_ns };

// Aggregate best-so-far curves across repetitions into a CSV table with
// columns: axis value, best_so_far_mean, best_so_far_std. All files must
// come from the same benchmark.
void export_plotdata(const std::vector<std::filesystem::path>& run_files,
                     PlotAxis axis, std::ostream& out);

}  // namespace wlb
