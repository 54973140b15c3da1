#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wlb/optimizers.hpp"

namespace wlb {

std::vector<HyperbandPlan::Bracket> HyperbandPlan::brackets() const {
  if (eta < 2) throw std::invalid_argument("eta must be >= 2");
  if (max_resource < static_cast<double>(eta)) {
    throw std::invalid_argument("max resource must be >= eta");
  }

  const double log_eta = std::log(static_cast<double>(eta));
  // Nudge before flooring: integer powers of eta must land on their exact
  // bracket count despite log rounding (e.g. log(243)/log(3) = 4.999...).
  const int s_max = static_cast<int>(
      std::floor(std::log(max_resource) / log_eta + 1e-9));

  std::vector<Bracket> out;
  for (int s = s_max; s >= 0; --s) {
    Bracket bracket;
    bracket.s = s;
    // Integer arithmetic for the halving counts: floor(n0 / eta^i) must not
    // wobble with the libm's pow rounding.
    std::int64_t eta_s = 1;
    for (int i = 0; i < s; ++i) eta_s *= eta;
    const std::int64_t n_start =
        (static_cast<std::int64_t>(s_max + 1) * eta_s + s) / (s + 1);  // ceil
    const double r_start = max_resource / static_cast<double>(eta_s);
    std::int64_t eta_i = 1;
    for (int i = 0; i <= s; ++i, eta_i *= eta) {
      const std::int64_t n_i = n_start / eta_i;
      if (n_i < 1) break;
      bracket.rungs.push_back({static_cast<int>(n_i),
                               r_start * static_cast<double>(eta_i)});
    }
    out.push_back(std::move(bracket));
  }
  return out;
}

namespace {

// Resource r in [1, R] maps to the continuous fidelity coordinate
// l = ln r / ln R, so the smallest resource is the loosest tolerance and
// r = R the tightest.
FidelitySpec fidelity_for_resource(double r, double max_resource) {
  const double l =
      std::clamp(std::log(std::max(r, 1.0)) / std::log(max_resource), 0.0, 1.0);
  return FidelitySpec::at_continuous(l);
}

struct Candidate {
  Eigen::VectorXd z;
  WarmState warm;
  double loss = 0.0;
};

}  // namespace

std::vector<EvalRecord> hyperband(const Benchmark& bench,
                                  const HyperbandPlan& plan,
                                  std::uint64_t seed) {
  const auto brackets = plan.brackets();
  RandomStream stream(seed);
  Evaluator ev(bench, seed);

  for (std::size_t b = 0; b < brackets.size(); ++b) {
    const auto& bracket = brackets[b];
    if (bracket.rungs.empty()) continue;

    // Sample the bracket's configurations; the heuristic default init is
    // planted as the first configuration of the first bracket.
    std::vector<Candidate> pool(
        static_cast<std::size_t>(bracket.rungs.front().n_configs));
    for (std::size_t c = 0; c < pool.size(); ++c) {
      if (b == 0 && c == 0 && plan.seed_default_init) {
        pool[c].z = default_init(bench);
        continue;
      }
      Eigen::VectorXd z(bench.d());
      for (Eigen::Index j = 0; j < bench.d(); ++j) {
        z[j] = stream.uniform(-1.0, 1.0);
      }
      pool[c].z = std::move(z);
    }

    for (std::size_t rung = 0; rung < bracket.rungs.size(); ++rung) {
      const auto& r = bracket.rungs[rung];
      const auto keep = static_cast<std::size_t>(r.n_configs);
      if (pool.size() > keep) pool.resize(keep);

      const FidelitySpec fid =
          fidelity_for_resource(r.resource, plan.max_resource);
      for (auto& cand : pool) {
        WarmState* warm = plan.warm_across_rungs ? &cand.warm : nullptr;
        cand.loss = ev.evaluate_z(cand.z, fid, warm).loss;
      }

      // Promote the lowest losses; stable order breaks ties by insertion.
      std::stable_sort(pool.begin(), pool.end(),
                       [](const Candidate& a, const Candidate& b) {
                         return a.loss < b.loss;
                       });
    }
  }
  return ev.take_trajectory();
}

}  // namespace wlb
