#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "wlb/baselines.hpp"
#include "wlb/harness.hpp"
#include "wlb/optimizers.hpp"

namespace wlb {

namespace {

using nlohmann::json;

std::vector<EvalRecord> dispatch_method(const Benchmark& bench,
                                        const ExperimentManifest& m,
                                        std::uint64_t seed) {
  if (m.method == "random-search") {
    return random_search(bench, m.budget, m.fidelity, seed);
  }
  if (m.method == "cmaes") {
    CmaesConfig cfg;
    cfg.population = m.population;
    cfg.sigma0 = m.sigma0;
    return cmaes(bench, m.budget, cfg, seed);
  }
  if (m.method == "hyperband") {
    HyperbandPlan plan;
    plan.eta = m.eta;
    plan.max_resource = m.max_resource;
    return hyperband(bench, plan, seed);
  }
  if (m.method == "lasso-cv") {
    return lasso_cv(bench, GridSpec::for_benchmark(bench, m.grid_points))
        .trajectory;
  }
  if (m.method == "adaptive-lasso-cv") {
    return adaptive_lasso_cv(bench,
                             GridSpec::for_benchmark(bench, m.grid_points),
                             m.n_reweight, m.eps)
        .trajectory;
  }
  if (m.method == "sparse-ho") {
    SparseHoConfig cfg;
    cfg.max_outer_iters = m.max_outer_iters;
    cfg.restart_period = m.restart_period;
    cfg.inner_tol = m.inner_tol;
    return sparse_ho(bench, cfg).trajectory;
  }
  if (m.method == "multi-start-sparse-ho") {
    SparseHoConfig cfg;
    cfg.max_outer_iters = m.max_outer_iters;
    cfg.restart_period = m.restart_period;
    cfg.inner_tol = m.inner_tol;
    return multi_start_sparse_ho(bench, cfg, m.budget, seed).trajectory;
  }
  throw std::invalid_argument("unknown method: " + m.method);
}

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') {
      c = '_';
    }
  }
  return out;
}

}  // namespace

RunResult run_experiment(const ExperimentManifest& manifest,
                         const std::filesystem::path& out_dir,
                         const std::filesystem::path& data_dir) {
  const Benchmark bench = resolve_benchmark(manifest.benchmark, data_dir);
  std::filesystem::create_directories(out_dir);

  const std::string stem =
      sanitize(bench.name()) + "_" + sanitize(manifest.method);

  struct RepOutcome {
    std::filesystem::path file;
    double best = 0.0;
    std::string error;  // non-empty marks a failed repetition
  };

  auto run_one = [&](int rep) -> RepOutcome {
    const std::uint64_t seed = manifest.base_seed + static_cast<std::uint64_t>(rep);
    RepOutcome outcome;
    outcome.file = out_dir / (stem + "_rep" + std::to_string(rep) + ".jsonl");
    try {
      TrajectoryFile traj;
      traj.benchmark = bench.name();
      traj.method = manifest.method;
      traj.seed = seed;
      traj.records = dispatch_method(bench, manifest, seed);
      for (auto& rec : traj.records) rec.seed = seed;
      if (traj.records.empty()) throw std::runtime_error("empty trajectory");
      write_trajectory(traj, outcome.file);
      double best = traj.records.front().loss;
      for (const auto& rec : traj.records) best = std::min(best, rec.loss);
      outcome.best = best;
    } catch (const std::exception& e) {
      outcome.error = e.what();
    }
    return outcome;
  };

  // Repetitions are independent; run them on a small async pool.
  std::vector<std::future<RepOutcome>> futures;
  futures.reserve(static_cast<std::size_t>(manifest.repetitions));
  for (int rep = 0; rep < manifest.repetitions; ++rep) {
    futures.push_back(std::async(std::launch::async, run_one, rep));
  }

  RunResult result;
  json rep_report = json::array();
  for (int rep = 0; rep < manifest.repetitions; ++rep) {
    RepOutcome outcome = futures[static_cast<std::size_t>(rep)].get();
    if (!outcome.error.empty()) {
      result.failed_repetitions.push_back(rep);
      // Failure marker preserves partial results and the reason.
      const std::filesystem::path marker = outcome.file.string() + ".failed";
      std::ofstream mark(marker);
      mark << outcome.error << '\n';
      rep_report.push_back(json{{"rep", rep}, {"error", outcome.error}});
      continue;
    }
    result.trajectory_files.push_back(outcome.file);
    result.best_losses.push_back(outcome.best);
    rep_report.push_back(json{{"rep", rep},
                              {"file", outcome.file.filename().string()},
                              {"best_loss", outcome.best}});
  }

  const auto n = static_cast<double>(result.best_losses.size());
  if (n > 0) {
    double mean = 0.0;
    for (double b : result.best_losses) mean += b;
    mean /= n;
    double var = 0.0;
    for (double b : result.best_losses) var += (b - mean) * (b - mean);
    result.mean_best = mean;
    result.std_best = n > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  }

  json summary;
  summary["benchmark"] = bench.name();
  summary["method"] = manifest.method;
  summary["budget"] = manifest.budget;
  summary["repetitions"] = manifest.repetitions;
  summary["base_seed"] = manifest.base_seed;
  summary["mean_best"] = result.mean_best;
  summary["std_best"] = result.std_best;
  summary["best_losses"] = result.best_losses;
  summary["failed_repetitions"] = result.failed_repetitions;
  summary["runs"] = rep_report;

  result.summary_file = out_dir / (stem + "_summary.json");
  const std::filesystem::path tmp = result.summary_file.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << summary.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, result.summary_file);
  return result;
}

Eigen::MatrixXd fidelity_correlation(const Benchmark& bench, int n_probes,
                                     std::uint64_t seed) {
  if (n_probes < 3) {
    throw std::invalid_argument("correlation needs at least 3 probes");
  }
  const int levels = static_cast<int>(kDiscreteTolerances.size());

  std::vector<Eigen::VectorXd> probes;
  probes.reserve(static_cast<std::size_t>(n_probes));
  RandomStream stream(seed);
  for (int p = 0; p < n_probes; ++p) {
    Eigen::VectorXd z(bench.d());
    for (Eigen::Index j = 0; j < bench.d(); ++j) {
      z[j] = stream.uniform(-1.0, 1.0);
    }
    probes.push_back(std::move(z));
  }

  Eigen::MatrixXd losses(n_probes, levels);
  Evaluator ev(bench, seed);
  for (int level = 0; level < levels; ++level) {
    for (int p = 0; p < n_probes; ++p) {
      losses(p, level) =
          ev.evaluate_z(probes[static_cast<std::size_t>(p)],
                        FidelitySpec::at_level(level))
              .loss;
    }
  }

  Eigen::MatrixXd corr(levels, levels);
  const Eigen::VectorXd means = losses.colwise().mean();
  Eigen::MatrixXd centered = losses.rowwise() - means.transpose();
  const Eigen::VectorXd norms = centered.colwise().norm();
  for (int a = 0; a < levels; ++a) {
    for (int b = 0; b < levels; ++b) {
      if (a == b) {
        corr(a, b) = 1.0;
      } else if (norms[a] == 0.0 || norms[b] == 0.0) {
        corr(a, b) = std::numeric_limits<double>::quiet_NaN();
      } else {
        corr(a, b) =
            centered.col(a).dot(centered.col(b)) / (norms[a] * norms[b]);
      }
    }
  }
  return corr;
}

double mean_highest_fidelity_cost(const Benchmark& bench, int n_probes,
                                  std::uint64_t seed) {
  if (n_probes < 1) throw std::invalid_argument("need at least one probe");
  RandomStream stream(seed);
  Evaluator ev(bench, seed);
  const FidelitySpec fid = bench.fidelity().highest();
  for (int p = 0; p < n_probes; ++p) {
    Eigen::VectorXd z(bench.d());
    for (Eigen::Index j = 0; j < bench.d(); ++j) {
      z[j] = stream.uniform(-1.0, 1.0);
    }
    ev.evaluate_z(z, fid);
  }
  return static_cast<double>(ev.total_cost()) / static_cast<double>(n_probes);
}

void export_plotdata(const std::vector<std::filesystem::path>& run_files,
                     PlotAxis axis, std::ostream& out) {
  if (run_files.empty()) {
    throw std::invalid_argument("no run files given");
  }

  std::vector<TrajectoryFile> runs;
  runs.reserve(run_files.size());
  for (const auto& path : run_files) {
    runs.push_back(read_trajectory(path));
    if (runs.back().benchmark != runs.front().benchmark) {
      throw std::invalid_argument(
          "run files mix benchmarks: " + runs.front().benchmark + " vs " +
          runs.back().benchmark);
    }
    if (runs.back().records.empty()) {
      throw std::invalid_argument("empty trajectory in " + path.string());
    }
  }

  // Per repetition: prefix best-so-far and cumulative axis value; shorter
  // runs carry their final state forward when aggregating.
  std::size_t longest = 0;
  std::vector<std::vector<double>> best_curves(runs.size());
  std::vector<std::vector<double>> axis_curves(runs.size());
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& records = runs[r].records;
    best_curves[r].resize(records.size());
    axis_curves[r].resize(records.size());
    double best = records[0].loss;
    double cumulative = 0.0;
    for (std::size_t k = 0; k < records.size(); ++k) {
      best = std::min(best, records[k].loss);
      best_curves[r][k] = best;
      switch (axis) {
        case PlotAxis::ordinal:
          cumulative = static_cast<double>(k);
          break;
        case PlotAxis::cost_units:
          cumulative += static_cast<double>(records[k].cost_units);
          break;
        case PlotAxis::wall_ns:
          cumulative += static_cast<double>(records[k].wall_ns);
          break;
      }
      axis_curves[r][k] = cumulative;
    }
    longest = std::max(longest, records.size());
  }

  out << "axis,best_so_far_mean,best_so_far_std\n";
  out.precision(17);
  for (std::size_t i = 0; i < longest; ++i) {
    double axis_sum = 0.0;
    double mean = 0.0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const std::size_t upto = std::min(i, best_curves[r].size() - 1);
      axis_sum += axis_curves[r][upto];
      mean += best_curves[r][upto];
    }
    const double denom = static_cast<double>(runs.size());
    axis_sum /= denom;
    mean /= denom;
    double var = 0.0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const std::size_t upto = std::min(i, best_curves[r].size() - 1);
      var += (best_curves[r][upto] - mean) * (best_curves[r][upto] - mean);
    }
    const double std_dev =
        runs.size() > 1 ? std::sqrt(var / (denom - 1.0)) : 0.0;
    out << axis_sum << ',' << mean << ',' << std_dev << '\n';
  }
}

}  // namespace wlb
