#include "wlb/benchmark.hpp"

#include <cmath>
#include <stdexcept>

namespace wlb {

Benchmark::Benchmark(Dataset dataset, double lam_min, double lam_max,
                     CvConfig criterion, FidelitySchedule fidelity,
                     std::string name, std::optional<Eigen::VectorXd> beta_true,
                     std::optional<SyntheticSpec> spec)
    : dataset_(std::make_shared<const Dataset>(std::move(dataset))),
      lam_min_(lam_min),
      lam_max_(lam_max),
      criterion_(criterion),
      fidelity_(fidelity),
      name_(std::move(name)),
      beta_true_(std::move(beta_true)),
      spec_(std::move(spec)) {
  if (!std::isfinite(lam_min_) || !std::isfinite(lam_max_) ||
      !(lam_min_ < lam_max_)) {
    throw std::invalid_argument("penalty bounds must be finite with lam_min < lam_max");
  }
  if (beta_true_ && beta_true_->size() != dataset_->d()) {
    throw std::invalid_argument("beta_true has wrong length");
  }
  split_ = std::make_shared<const CvSplit>(*dataset_, criterion_);
  if (beta_true_) {
    reference_loss_ = fixed_beta_cv_mse(*split_, *beta_true_);
  }
}

double compute_lambda_max(const Dataset& ds) { return lambda_max(ds); }

std::pair<double, double> compute_bounds(const Dataset& ds, BoundsKind kind) {
  const double top = compute_lambda_max(ds);
  double decades = 0.0;
  switch (kind) {
    case BoundsKind::synthetic: decades = 2.0; break;
    case BoundsKind::real: decades = 5.0; break;
    case BoundsKind::rcv1_like: decades = 3.0; break;
  }
  return {top - decades * std::log(10.0), top};
}

namespace {

Eigen::VectorXd clip_into(const Eigen::VectorXd& v, double lo, double hi,
                          bool* clipped) {
  if (clipped != nullptr) *clipped = false;
  Eigen::VectorXd out = v;
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    if (out[j] < lo) {
      out[j] = lo;
      if (clipped != nullptr) *clipped = true;
    } else if (out[j] > hi) {
      out[j] = hi;
      if (clipped != nullptr) *clipped = true;
    }
  }
  return out;
}

}  // namespace

Eigen::VectorXd to_search_space(const Benchmark& bench,
                                const Eigen::VectorXd& lam, bool* clipped) {
  if (lam.size() != bench.d()) {
    throw std::invalid_argument("penalty vector has wrong length");
  }
  const Eigen::VectorXd bounded =
      clip_into(lam, bench.lam_min(), bench.lam_max(), clipped);
  const double width = bench.lam_max() - bench.lam_min();
  return (2.0 * (bounded.array() - bench.lam_min()) / width - 1.0).matrix();
}

Eigen::VectorXd from_search_space(const Benchmark& bench,
                                  const Eigen::VectorXd& z, bool* clipped) {
  if (z.size() != bench.d()) {
    throw std::invalid_argument("search-space vector has wrong length");
  }
  const Eigen::VectorXd bounded = clip_into(z, -1.0, 1.0, clipped);
  const double width = bench.lam_max() - bench.lam_min();
  return (bench.lam_min() + (bounded.array() + 1.0) / 2.0 * width).matrix();
}

Eigen::VectorXd default_init(const Benchmark& bench) {
  const double lam = bench.lam_max() - std::log(10.0);
  return to_search_space(
      bench, Eigen::VectorXd::Constant(bench.d(), lam));
}

}  // namespace wlb
