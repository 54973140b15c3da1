// Command-line front end: benchmark generation, experiment runs, single
// evaluations, the eval service, and analysis exports.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime failure.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wlb/baselines.hpp"
#include "wlb/harness.hpp"
#include "wlb/libsvm.hpp"
#include "wlb/service.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::filesystem::path data_directory(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("WLBENCH_DATA_DIR")) return env;
  return std::filesystem::current_path();
}

Eigen::VectorXd parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    values.push_back(std::stod(item));
  }
  if (values.empty()) throw std::invalid_argument("empty vector literal");
  return Eigen::Map<const Eigen::VectorXd>(
      values.data(), static_cast<Eigen::Index>(values.size()));
}

int cmd_generate(const std::string& preset, bool noisy, std::uint64_t seed,
                 const std::string& name, Eigen::Index n, Eigen::Index d,
                 Eigen::Index d_e, double rho, double snr,
                 const std::filesystem::path& out_dir) {
  wlb::SyntheticSpec spec;
  if (!preset.empty()) {
    spec = wlb::synthetic_preset(preset, noisy, seed);
  } else {
    if (n < 1 || d < 1 || d_e < 1) {
      throw std::invalid_argument(
          "custom generation needs --n, --d and --de (or use --preset)");
    }
    spec.n = n;
    spec.d = d;
    spec.d_e = d_e;
    spec.rho = rho;
    spec.snr = snr;
    spec.seed = seed;
    spec.name = name.empty() ? "synt_custom" : name;
  }
  if (!name.empty()) spec.name = name;

  const wlb::Benchmark bench = wlb::make_synthetic(spec);
  std::filesystem::create_directories(out_dir);

  const auto manifest_path = out_dir / (spec.name + ".manifest.json");
  wlb::write_benchmark_manifest(bench, manifest_path);

  const auto data_path = out_dir / (spec.name + ".libsvm");
  std::ofstream data_out(data_path);
  if (!data_out) {
    throw std::runtime_error("cannot write " + data_path.string());
  }
  wlb::write_libsvm(data_out, bench.dataset());

  json report{{"manifest", manifest_path.string()},
              {"data", data_path.string()},
              {"name", spec.name},
              {"n", bench.n()},
              {"d", bench.d()},
              {"lam_min", bench.lam_min()},
              {"lam_max", bench.lam_max()}};
  std::cout << report.dump(2) << '\n';
  return kExitOk;
}

int cmd_bounds(const std::string& benchmark, const std::filesystem::path& data_dir) {
  const wlb::Benchmark bench = wlb::resolve_benchmark(benchmark, data_dir);
  json out{{"name", bench.name()},
           {"lam_min", bench.lam_min()},
           {"lam_max", bench.lam_max()},
           {"d", bench.d()}};
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int cmd_eval(const std::string& benchmark, const std::string& z_text,
             bool use_default_init, int level, double continuous,
             const std::filesystem::path& data_dir) {
  const wlb::Benchmark bench = wlb::resolve_benchmark(benchmark, data_dir);

  Eigen::VectorXd z;
  if (use_default_init) {
    z = wlb::default_init(bench);
  } else if (!z_text.empty()) {
    z = parse_vector(z_text);
    if (z.size() != bench.d()) {
      throw std::invalid_argument("--z needs exactly " +
                                  std::to_string(bench.d()) + " coordinates");
    }
  } else {
    throw std::invalid_argument("provide --z or --default-init");
  }

  wlb::FidelitySpec fid = bench.fidelity().highest();
  if (level >= 0) fid = wlb::FidelitySpec::at_level(level);
  if (continuous >= 0.0) fid = wlb::FidelitySpec::at_continuous(continuous);

  wlb::Evaluator ev(bench, 0);
  const wlb::EvalRecord& rec = ev.evaluate_z(z, fid);
  json out{{"benchmark", bench.name()},
           {"loss", rec.loss},
           {"raw_loss", rec.raw_loss},
           {"cost_units", rec.cost_units},
           {"wall_ns", rec.wall_ns}};
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int cmd_run(const std::string& manifest_path, const std::string& benchmark,
            const std::string& method, int budget, int reps,
            std::uint64_t seed, const std::filesystem::path& out_dir,
            const std::filesystem::path& data_dir) {
  wlb::ExperimentManifest manifest;
  if (!manifest_path.empty()) {
    manifest = wlb::read_experiment_manifest(manifest_path);
  } else {
    if (benchmark.empty() || method.empty()) {
      throw std::invalid_argument("provide --manifest or --benchmark + --method");
    }
    manifest.benchmark = benchmark;
    manifest.method = method;
    manifest.budget = budget;
    manifest.repetitions = reps;
    manifest.base_seed = seed;
  }

  const wlb::RunResult result =
      wlb::run_experiment(manifest, out_dir, data_dir);
  json out{{"summary", result.summary_file.string()},
           {"trajectories", result.trajectory_files.size()},
           {"mean_best", result.mean_best},
           {"std_best", result.std_best},
           {"failed_repetitions", result.failed_repetitions}};
  std::cout << out.dump(2) << '\n';
  return result.failed_repetitions.empty() ? kExitOk : kExitRuntime;
}

int cmd_serve(const std::string& benchmark, const std::string& transport,
              int port, const std::filesystem::path& data_dir) {
  const wlb::Benchmark bench = wlb::resolve_benchmark(benchmark, data_dir);
  if (transport == "stdio") {
    wlb::serve_stdio(bench, std::cin, std::cout);
    return kExitOk;
  }
  if (transport == "tcp") {
    wlb::serve_tcp(bench, static_cast<std::uint16_t>(port),
                   [](std::uint16_t bound) {
                     std::cerr << "listening on 127.0.0.1:" << bound << '\n';
                   });
    return kExitOk;
  }
  throw std::invalid_argument("unknown transport '" + transport + "'");
}

int cmd_fidelity_corr(const std::string& benchmark, int probes,
                      std::uint64_t seed, const std::string& format,
                      const std::filesystem::path& data_dir) {
  const wlb::Benchmark bench = wlb::resolve_benchmark(benchmark, data_dir);
  const Eigen::MatrixXd corr = wlb::fidelity_correlation(bench, probes, seed);

  if (format == "csv") {
    std::cout.precision(17);
    for (Eigen::Index i = 0; i < corr.rows(); ++i) {
      for (Eigen::Index j = 0; j < corr.cols(); ++j) {
        if (j > 0) std::cout << ',';
        std::cout << corr(i, j);
      }
      std::cout << '\n';
    }
    return kExitOk;
  }
  json rows = json::array();
  for (Eigen::Index i = 0; i < corr.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < corr.cols(); ++j) {
      if (std::isnan(corr(i, j))) {
        row.push_back(nullptr);  // undefined marker for a constant column
      } else {
        row.push_back(corr(i, j));
      }
    }
    rows.push_back(row);
  }
  std::cout << json{{"benchmark", bench.name()}, {"pearson", rows}}.dump(2)
            << '\n';
  return kExitOk;
}

int cmd_export(const std::vector<std::string>& files, const std::string& axis,
               const std::string& out_path) {
  wlb::PlotAxis plot_axis;
  if (axis == "ordinal") {
    plot_axis = wlb::PlotAxis::ordinal;
  } else if (axis == "cost") {
    plot_axis = wlb::PlotAxis::cost_units;
  } else if (axis == "wall") {
    plot_axis = wlb::PlotAxis::wall_ns;
  } else {
    throw std::invalid_argument("unknown axis '" + axis + "'");
  }

  std::vector<std::filesystem::path> paths(files.begin(), files.end());
  if (out_path.empty() || out_path == "-") {
    wlb::export_plotdata(paths, plot_axis, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    wlb::export_plotdata(paths, plot_axis, out);
  }
  return kExitOk;
}

int cmd_estimate_de(const std::string& benchmark, int budget,
                    std::uint64_t seed, const std::filesystem::path& data_dir) {
  const wlb::Benchmark bench = wlb::resolve_benchmark(benchmark, data_dir);
  const int de = wlb::estimate_effective_dim(bench, budget, seed);
  json out{{"benchmark", bench.name()},
           {"budget", budget},
           {"effective_dim", de}};
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted-Lasso hyperparameter benchmark toolkit"};
  app.require_subcommand(1);

  std::string data_dir_flag;
  app.add_option("--data-dir", data_dir_flag,
                 "Directory with real-world dataset files "
                 "(default: $WLBENCH_DATA_DIR, then the working directory)");

  // generate
  auto* generate = app.add_subcommand("generate", "Create a synthetic benchmark");
  std::string gen_preset, gen_name;
  bool gen_noisy = false;
  std::uint64_t gen_seed = 42;
  long long gen_n = 0, gen_d = 0, gen_de = 0;
  double gen_rho = 0.6, gen_snr = 10.0;
  std::string gen_out = ".";
  generate->add_option("--preset", gen_preset,
                       "synt_simple|synt_medium|synt_high|synt_hard");
  generate->add_flag("--noisy", gen_noisy, "Use SNR=3 instead of 10");
  generate->add_option("--seed", gen_seed, "Generator seed");
  generate->add_option("--name", gen_name, "Benchmark name override");
  generate->add_option("--n", gen_n, "Samples (custom spec)");
  generate->add_option("--d", gen_d, "Features (custom spec)");
  generate->add_option("--de", gen_de, "Ground-truth nonzeros (custom spec)");
  generate->add_option("--rho", gen_rho, "Feature correlation in [0,1)");
  generate->add_option("--snr", gen_snr, "Signal-to-noise ratio");
  generate->add_option("--out", gen_out, "Output directory");

  // run
  auto* run = app.add_subcommand("run", "Execute an experiment manifest");
  std::string run_manifest, run_benchmark, run_method;
  int run_budget = 1000, run_reps = 30;
  std::uint64_t run_seed = 42;
  std::string run_out = "runs";
  run->add_option("--manifest", run_manifest, "Experiment manifest JSON file");
  run->add_option("--benchmark", run_benchmark, "Benchmark name/manifest");
  run->add_option("--method", run_method,
                  "random-search|cmaes|hyperband|lasso-cv|adaptive-lasso-cv|"
                  "sparse-ho|multi-start-sparse-ho");
  run->add_option("--budget", run_budget, "Evaluation budget");
  run->add_option("--reps", run_reps, "Repetitions");
  run->add_option("--seed", run_seed, "Base seed (replicate r adds r)");
  run->add_option("--out", run_out, "Output directory");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a single configuration");
  std::string eval_benchmark, eval_z;
  bool eval_default = false;
  int eval_level = -1;
  double eval_continuous = -1.0;
  eval->add_option("--benchmark", eval_benchmark, "Benchmark name/manifest")
      ->required();
  eval->add_option("--z", eval_z, "Comma-separated point in [-1,1]^d");
  eval->add_flag("--default-init", eval_default, "Evaluate the heuristic init");
  eval->add_option("--level", eval_level, "Discrete fidelity level 0..4");
  eval->add_option("--continuous", eval_continuous,
                   "Continuous fidelity in [0,1]");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the evaluation service");
  std::string serve_benchmark, serve_transport = "stdio";
  int serve_port = 0;
  serve->add_option("--benchmark", serve_benchmark, "Benchmark name/manifest")
      ->required();
  serve->add_option("--transport", serve_transport, "stdio|tcp");
  serve->add_option("--port", serve_port, "TCP port (0 = ephemeral)");

  // fidelity-corr
  auto* corr = app.add_subcommand("fidelity-corr",
                                  "Pearson correlation across fidelity levels");
  std::string corr_benchmark, corr_format = "json";
  int corr_probes = 100;
  std::uint64_t corr_seed = 42;
  corr->add_option("--benchmark", corr_benchmark, "Benchmark name/manifest")
      ->required();
  corr->add_option("--probes", corr_probes, "Number of uniform probes");
  corr->add_option("--seed", corr_seed, "Probe seed");
  corr->add_option("--format", corr_format, "json|csv");

  // export
  auto* export_cmd = app.add_subcommand("export", "Best-so-far CSV curves");
  std::vector<std::string> export_files;
  std::string export_axis = "ordinal", export_out;
  export_cmd->add_option("files", export_files, "Trajectory JSONL files")
      ->required();
  export_cmd->add_option("--axis", export_axis, "ordinal|cost|wall");
  export_cmd->add_option("--out", export_out, "Output CSV path (default stdout)");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Print penalty bounds");
  std::string bounds_benchmark;
  bounds->add_option("--benchmark", bounds_benchmark, "Benchmark name/manifest")
      ->required();

  // estimate-de
  auto* estimate = app.add_subcommand("estimate-de",
                                      "Estimate the effective dimension");
  std::string est_benchmark;
  int est_budget = 50;
  std::uint64_t est_seed = 0;
  estimate->add_option("--benchmark", est_benchmark, "Benchmark name/manifest")
      ->required();
  estimate->add_option("--budget", est_budget, "Evaluation budget");
  estimate->add_option("--seed", est_seed, "Restart seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::filesystem::path data_dir = data_directory(data_dir_flag);
  try {
    if (generate->parsed()) {
      return cmd_generate(gen_preset, gen_noisy, gen_seed, gen_name, gen_n,
                          gen_d, gen_de, gen_rho, gen_snr, gen_out);
    }
    if (run->parsed()) {
      return cmd_run(run_manifest, run_benchmark, run_method, run_budget,
                     run_reps, run_seed, run_out, data_dir);
    }
    if (eval->parsed()) {
      return cmd_eval(eval_benchmark, eval_z, eval_default, eval_level,
                      eval_continuous, data_dir);
    }
    if (serve->parsed()) {
      return cmd_serve(serve_benchmark, serve_transport, serve_port, data_dir);
    }
    if (corr->parsed()) {
      return cmd_fidelity_corr(corr_benchmark, corr_probes, corr_seed,
                               corr_format, data_dir);
    }
    if (export_cmd->parsed()) {
      return cmd_export(export_files, export_axis, export_out);
    }
    if (bounds->parsed()) {
      return cmd_bounds(bounds_benchmark, data_dir);
    }
    if (estimate->parsed()) {
      return cmd_estimate_de(est_benchmark, est_budget, est_seed, data_dir);
    }
    std::cerr << "no subcommand given\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
