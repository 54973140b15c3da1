#include <stdexcept>

#include "wlb/optimizers.hpp"

namespace wlb {

std::vector<Eigen::VectorXd> RandomSearch::ask() {
  Eigen::VectorXd z(d_);
  for (Eigen::Index j = 0; j < d_; ++j) {
    z[j] = stream_.uniform(-1.0, 1.0);
  }
  return {std::move(z)};
}

std::vector<EvalRecord> random_search(const Benchmark& bench, int budget,
                                      const FidelitySpec& fidelity,
                                      std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");

  RandomSearch rs(bench.d(), seed);
  Evaluator ev(bench, seed);
  for (int i = 0; i < budget; ++i) {
    auto batch = rs.ask();
    std::vector<double> losses;
    losses.reserve(batch.size());
    for (const auto& z : batch) {
      losses.push_back(ev.evaluate_z(z, fidelity).loss);
    }
    rs.tell(batch, losses);
  }
  return ev.take_trajectory();
}

}  // namespace wlb
