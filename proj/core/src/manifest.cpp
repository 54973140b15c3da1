#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "wlb/harness.hpp"
#include "wlb/libsvm.hpp"

namespace wlb {

namespace {

using nlohmann::json;

json fidelity_to_json(const FidelitySpec& fid) {
  if (fid.kind == FidelitySpec::Kind::discrete) {
    return json{{"discrete", fid.level}};
  }
  return json{{"continuous", fid.continuous}};
}

FidelitySpec fidelity_from_json(const json& j) {
  if (!j.is_object() || j.size() != 1) {
    throw std::invalid_argument(
        "fidelity must be {\"discrete\": level} or {\"continuous\": l}");
  }
  if (j.contains("discrete")) {
    const int level = j.at("discrete").get<int>();
    fidelity_from_resource(level);  // range check
    return FidelitySpec::at_level(level);
  }
  if (j.contains("continuous")) {
    const double l = j.at("continuous").get<double>();
    fidelity_from_resource(l);  // range check
    return FidelitySpec::at_continuous(l);
  }
  throw std::invalid_argument("unknown fidelity kind");
}

json schedule_to_json(const FidelitySchedule& schedule) {
  json tolerances = json::array();
  for (double t : kDiscreteTolerances) tolerances.push_back(t);
  return json{
      {"kind", schedule.kind == FidelitySchedule::Kind::discrete
                   ? "discrete"
                   : "continuous"},
      {"levels", schedule.n_levels()},
      {"tolerances", tolerances},
  };
}

json criterion_to_json(const CvConfig& cfg) {
  return json{{"k_folds", cfg.k_folds},
              {"fold_seed", cfg.fold_seed},
              {"tol", cfg.tol}};
}

CvConfig criterion_from_json(const json& j) {
  CvConfig cfg;
  cfg.k_folds = j.value("k_folds", cfg.k_folds);
  cfg.fold_seed = j.value("fold_seed", cfg.fold_seed);
  cfg.tol = j.value("tol", cfg.tol);
  return cfg;
}

}  // namespace

std::string benchmark_manifest_json(const Benchmark& bench) {
  json j;
  j["name"] = bench.name();
  j["lam_min"] = bench.lam_min();
  j["lam_max"] = bench.lam_max();
  j["criterion"] = criterion_to_json(bench.criterion());
  j["fidelity"] = schedule_to_json(bench.fidelity());
  if (bench.spec()) {
    const auto& spec = *bench.spec();
    j["kind"] = "synthetic";
    j["spec"] = json{{"n", spec.n},     {"d", spec.d},
                     {"d_e", spec.d_e}, {"rho", spec.rho},
                     {"snr", spec.snr}, {"seed", spec.seed}};
  } else {
    j["kind"] = "real";
    j["registry"] = bench.name();
  }
  return j.dump(2);
}

void write_benchmark_manifest(const Benchmark& bench,
                              const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << benchmark_manifest_json(bench) << '\n';
}

namespace {

Benchmark benchmark_from_manifest(const json& j,
                                  const std::filesystem::path& data_dir) {
  const std::string kind = j.value("kind", "synthetic");
  if (kind == "synthetic") {
    const json& s = j.at("spec");
    SyntheticSpec spec;
    spec.n = s.at("n").get<Eigen::Index>();
    spec.d = s.at("d").get<Eigen::Index>();
    spec.d_e = s.at("d_e").get<Eigen::Index>();
    spec.rho = s.value("rho", spec.rho);
    spec.snr = s.value("snr", spec.snr);
    spec.seed = s.value("seed", spec.seed);
    spec.name = j.value("name", spec.name);
    Benchmark bench = make_synthetic(spec);
    // Regeneration check: recorded bounds must match the rebuilt benchmark.
    if (j.contains("lam_max") &&
        (std::abs(bench.lam_max() - j.at("lam_max").get<double>()) > 1e-12 ||
         std::abs(bench.lam_min() - j.at("lam_min").get<double>()) > 1e-12)) {
      throw std::runtime_error(
          "manifest bounds disagree with regenerated benchmark");
    }
    if (j.contains("criterion")) {
      const CvConfig recorded = criterion_from_json(j.at("criterion"));
      const CvConfig& rebuilt = bench.criterion();
      if (recorded.k_folds != rebuilt.k_folds ||
          recorded.fold_seed != rebuilt.fold_seed ||
          recorded.tol != rebuilt.tol) {
        throw std::runtime_error(
            "manifest criterion disagrees with regenerated benchmark");
      }
    }
    return bench;
  }
  if (kind == "real") {
    const std::string name = j.at("registry").get<std::string>();
    const DatasetRegistryEntry* entry = find_registry_entry(name);
    if (entry == nullptr) {
      throw std::invalid_argument("unknown dataset registry entry: " + name);
    }
    return load_real_benchmark(*entry, data_dir);
  }
  throw std::invalid_argument("unknown benchmark kind: " + kind);
}

}  // namespace

Benchmark resolve_benchmark(const std::string& name_or_path,
                            const std::filesystem::path& data_dir) {
  std::string base = name_or_path;
  bool noisy = false;
  if (const auto pos = base.rfind("_noisy");
      pos != std::string::npos && pos + 6 == base.size()) {
    base = base.substr(0, pos);
    noisy = true;
  }
  if (is_synthetic_preset(base)) {
    return make_synthetic(synthetic_preset(base, noisy));
  }
  if (const DatasetRegistryEntry* entry = find_registry_entry(name_or_path)) {
    return load_real_benchmark(*entry, data_dir);
  }

  const std::filesystem::path path(name_or_path);
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument(
        "'" + name_or_path +
        "' is neither a preset, a registry dataset, nor a readable manifest");
  }
  json j;
  in >> j;
  return benchmark_from_manifest(j, data_dir);
}

ExperimentManifest parse_experiment_manifest(const std::string& json_text) {
  json j = json::parse(json_text);
  ExperimentManifest m;
  m.benchmark = j.at("benchmark").get<std::string>();
  m.method = j.at("method").get<std::string>();
  m.budget = j.value("budget", m.budget);
  m.repetitions = j.value("repetitions", m.repetitions);
  m.base_seed = j.value("base_seed", m.base_seed);
  if (j.contains("fidelity")) m.fidelity = fidelity_from_json(j.at("fidelity"));
  m.grid_points = j.value("grid_points", m.grid_points);
  m.n_reweight = j.value("n_reweight", m.n_reweight);
  m.eps = j.value("eps", m.eps);
  m.population = j.value("population", m.population);
  m.sigma0 = j.value("sigma0", m.sigma0);
  m.eta = j.value("eta", m.eta);
  m.max_resource = j.value("max_resource", m.max_resource);
  m.max_outer_iters = j.value("max_outer_iters", m.max_outer_iters);
  m.restart_period = j.value("restart_period", m.restart_period);
  m.inner_tol = j.value("inner_tol", m.inner_tol);
  if (m.repetitions < 1) {
    throw std::invalid_argument("repetitions must be >= 1");
  }
  return m;
}

ExperimentManifest read_experiment_manifest(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_manifest(buffer.str());
}

std::string experiment_manifest_json(const ExperimentManifest& m) {
  json j;
  j["benchmark"] = m.benchmark;
  j["method"] = m.method;
  j["budget"] = m.budget;
  j["repetitions"] = m.repetitions;
  j["base_seed"] = m.base_seed;
  j["fidelity"] = fidelity_to_json(m.fidelity);
  j["grid_points"] = m.grid_points;
  j["n_reweight"] = m.n_reweight;
  j["eps"] = m.eps;
  j["population"] = m.population;
  j["sigma0"] = m.sigma0;
  j["eta"] = m.eta;
  j["max_resource"] = m.max_resource;
  j["max_outer_iters"] = m.max_outer_iters;
  j["restart_period"] = m.restart_period;
  j["inner_tol"] = m.inner_tol;
  return j.dump(2);
}

// ---- Trajectory persistence ---------------------------------------------

namespace {

json record_to_json(const EvalRecord& rec) {
  json j;
  j["ordinal"] = rec.ordinal;
  j["z"] = std::vector<double>(rec.z.data(), rec.z.data() + rec.z.size());
  j["fidelity"] = fidelity_to_json(rec.fidelity);
  j["loss"] = rec.loss;
  j["raw_loss"] = rec.raw_loss;
  j["cost_units"] = rec.cost_units;
  j["wall_ns"] = rec.wall_ns;
  j["seed"] = rec.seed;
  return j;
}

EvalRecord record_from_json(const json& j) {
  EvalRecord rec;
  rec.ordinal = j.at("ordinal").get<std::int64_t>();
  const auto z = j.at("z").get<std::vector<double>>();
  rec.z = Eigen::Map<const Eigen::VectorXd>(z.data(),
                                            static_cast<Eigen::Index>(z.size()));
  rec.fidelity = fidelity_from_json(j.at("fidelity"));
  rec.loss = j.at("loss").get<double>();
  rec.raw_loss = j.at("raw_loss").get<double>();
  rec.cost_units = j.at("cost_units").get<std::uint64_t>();
  rec.wall_ns = j.at("wall_ns").get<std::int64_t>();
  rec.seed = j.at("seed").get<std::uint64_t>();
  return rec;
}

}  // namespace

void write_trajectory(const TrajectoryFile& traj,
                      const std::filesystem::path& path) {
  // Atomic publish: write a sibling temp file, then rename over the target.
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    json meta;
    meta["benchmark"] = traj.benchmark;
    meta["method"] = traj.method;
    meta["seed"] = traj.seed;
    meta["records"] = traj.records.size();
    out << meta.dump() << '\n';
    for (const auto& rec : traj.records) {
      out << record_to_json(rec).dump() << '\n';
    }
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

TrajectoryFile read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  TrajectoryFile traj;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty trajectory file " + path.string());
  }
  const json meta = json::parse(line);
  traj.benchmark = meta.at("benchmark").get<std::string>();
  traj.method = meta.at("method").get<std::string>();
  traj.seed = meta.at("seed").get<std::uint64_t>();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    traj.records.push_back(record_from_json(json::parse(line)));
  }
  return traj;
}

}  // namespace wlb
