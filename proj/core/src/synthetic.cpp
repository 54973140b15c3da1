#include <cmath>
#include <stdexcept>

#include "wlb/benchmark.hpp"
#include "wlb/rng.hpp"

namespace wlb {

namespace {

void validate(const SyntheticSpec& spec) {
  if (spec.n < 1 || spec.d < 1) {
    throw std::invalid_argument("synthetic spec needs n >= 1 and d >= 1");
  }
  if (spec.d_e < 1 || spec.d_e > spec.d) {
    throw std::invalid_argument("effective dimension must satisfy 1 <= d_e <= d");
  }
  if (!(spec.rho >= 0.0 && spec.rho < 1.0)) {
    throw std::invalid_argument("rho must lie in [0, 1)");
  }
  if (!(spec.snr > 0.0)) {
    throw std::invalid_argument("snr must be positive");
  }
}

// Ground truth: d_e nonzeros at the first d_e multiples of floor(d/d_e),
// magnitudes (k+1)/d_e for k = 0..d_e-1 with alternating sign starting
// positive — deterministic, spans (0,1], exercises both signs.
Eigen::VectorXd ground_truth(const SyntheticSpec& spec) {
  // The support occupies the first d_e coordinates as a contiguous block:
  // under the AR(1) design the block's alternating signs make neighbouring
  // columns cancel in every correlation, so the signal cannot be picked up
  // one coordinate at a time. Magnitudes are proportionally spaced in (0, 1]
  // so all d_e entries are nonzero.
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(spec.d);
  for (Eigen::Index k = 0; k < spec.d_e; ++k) {
    const double magnitude =
        static_cast<double>(k + 1) / static_cast<double>(spec.d_e);
    beta[k] = (k % 2 == 0) ? magnitude : -magnitude;
  }
  return beta;
}

}  // namespace

SyntheticSpec synthetic_preset(const std::string& name, bool noisy,
                               std::uint64_t seed) {
  SyntheticSpec spec;
  if (name == "synt_simple") {
    spec.n = 30; spec.d = 60; spec.d_e = 3;
  } else if (name == "synt_medium") {
    spec.n = 50; spec.d = 100; spec.d_e = 5;
  } else if (name == "synt_high") {
    spec.n = 150; spec.d = 300; spec.d_e = 15;
  } else if (name == "synt_hard") {
    spec.n = 500; spec.d = 1000; spec.d_e = 50;
  } else {
    throw std::invalid_argument("unknown synthetic preset: " + name);
  }
  spec.snr = noisy ? 3.0 : 10.0;
  spec.seed = seed;
  spec.name = noisy ? name + "_noisy" : name;
  return spec;
}

bool is_synthetic_preset(const std::string& name) {
  return name == "synt_simple" || name == "synt_medium" ||
         name == "synt_high" || name == "synt_hard";
}

Benchmark make_synthetic(const SyntheticSpec& spec) {
  validate(spec);

  // Named substreams off the master seed: 0 = design matrix, 1 = noise.
  SeedSequence seeds(spec.seed);
  RandomStream design_stream(seeds.next());
  RandomStream noise_stream(seeds.next());

  const Eigen::Index n = spec.n;
  const Eigen::Index d = spec.d;

  // AR(1) across columns gives corr(x_i, x_j) = rho^|i-j| exactly without a
  // d x d Cholesky: column j mixes column j-1 with fresh Gaussian noise.
  // Draw order: column by column, rows in order.
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = design_stream.normal();
  }
  const double carry = spec.rho;
  const double fresh = std::sqrt(1.0 - spec.rho * spec.rho);
  for (Eigen::Index j = 1; j < d; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      X(i, j) = carry * X(i, j - 1) + fresh * design_stream.normal();
    }
  }

  const Eigen::VectorXd beta = ground_truth(spec);
  const Eigen::VectorXd signal = X * beta;

  Eigen::VectorXd noise(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    noise[i] = noise_stream.normal();
  }
  // Rescale so ||X beta|| / ||noise|| equals snr exactly.
  const double signal_norm = signal.norm();
  const double noise_norm = noise.norm();
  if (noise_norm > 0.0 && signal_norm > 0.0) {
    noise *= signal_norm / (spec.snr * noise_norm);
  } else {
    noise.setZero();
  }
  const Eigen::VectorXd y = signal + noise;

  Dataset ds(std::move(X), y, spec.name);
  const auto [lam_min, lam_max] = compute_bounds(ds, BoundsKind::synthetic);

  CvConfig criterion;
  criterion.fold_seed = spec.seed;

  return Benchmark(std::move(ds), lam_min, lam_max, criterion,
                   FidelitySchedule{}, spec.name, beta, spec);
}

}  // namespace wlb
