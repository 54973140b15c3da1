#include <doctest.h>

#include <cmath>
#include <cstring>

#include "test_support.hpp"
#include "wlb/benchmark.hpp"
#include "wlb/criteria.hpp"
#include "wlb/solver.hpp"

using wlb::Benchmark;
using wlb::BoundsKind;
using wlb::Dataset;
using wlb::SyntheticSpec;

namespace {

// A benchmark with prescribed bounds around a tiny dataset; the data only
// matter for dimension bookkeeping.
Benchmark toy_bench(Eigen::Index d, double lam_min, double lam_max) {
  const Eigen::Index n = std::max<Eigen::Index>(4, d + 2);
  wlb::CvConfig cfg;
  cfg.k_folds = 2;
  return Benchmark(Dataset(wlbtest::random_matrix(n, d, 404),
                           wlbtest::random_vector(n, 405)),
                   lam_min, lam_max, cfg, wlb::FidelitySchedule{}, "toy");
}

}  // namespace

TEST_SUITE_BEGIN("benchmark");

TEST_CASE("lambda_max hand value and bound rules") {
  Eigen::MatrixXd x(2, 2);
  x << 1, 0, 0, 1;
  Eigen::VectorXd y(2);
  y << 2, 4;
  const Dataset ds(x, y);
  CHECK(wlb::compute_lambda_max(ds) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));

  const double l10 = std::log(10.0);
  const auto [syn_lo, syn_hi] = wlb::compute_bounds(ds, BoundsKind::synthetic);
  CHECK(syn_hi == doctest::Approx(std::log(2.0)));
  CHECK(syn_hi - syn_lo == doctest::Approx(2.0 * l10));
  // Spec'd arithmetic for a benchmark whose lambda_max is 0.5.
  CHECK(0.5 - 2.0 * l10 == doctest::Approx(-4.105).epsilon(1e-3));

  const auto [real_lo, real_hi] = wlb::compute_bounds(ds, BoundsKind::real);
  CHECK(real_hi - real_lo == doctest::Approx(5.0 * l10));
  const auto [rcv_lo, rcv_hi] = wlb::compute_bounds(ds, BoundsKind::rcv1_like);
  CHECK(rcv_hi - rcv_lo == doctest::Approx(3.0 * l10));
}

TEST_CASE("search-space mapping is an affine bijection with clipping") {
  const Benchmark bench = toy_bench(3, -4.0, 1.0);

  const Eigen::VectorXd at_min =
      wlb::from_search_space(bench, Eigen::VectorXd::Constant(3, -1.0));
  const Eigen::VectorXd at_max =
      wlb::from_search_space(bench, Eigen::VectorXd::Constant(3, 1.0));
  CHECK((at_min.array() == -4.0).all());
  CHECK((at_max.array() == 1.0).all());

  Eigen::VectorXd lam(3);
  lam << -3.5, -1.0, 0.25;
  bool clipped = true;
  const Eigen::VectorXd z = wlb::to_search_space(bench, lam, &clipped);
  CHECK(!clipped);
  CHECK((z.array() >= -1.0).all());
  CHECK((z.array() <= 1.0).all());
  const Eigen::VectorXd back = wlb::from_search_space(bench, z, &clipped);
  CHECK(!clipped);
  CHECK((back - lam).cwiseAbs().maxCoeff() <= 1e-12);

  Eigen::VectorXd wild(3);
  wild << -9.0, 0.0, 7.0;
  const Eigen::VectorXd zc = wlb::to_search_space(bench, wild, &clipped);
  CHECK(clipped);
  CHECK(zc[0] == -1.0);
  CHECK(zc[2] == 1.0);

  Eigen::VectorXd z_out(3);
  z_out << -2.0, 0.5, 3.0;
  const Eigen::VectorXd lam_c = wlb::from_search_space(bench, z_out, &clipped);
  CHECK(clipped);
  CHECK(lam_c[0] == -4.0);
  CHECK(lam_c[2] == 1.0);

  CHECK_THROWS_AS(wlb::to_search_space(bench, Eigen::VectorXd::Zero(2)),
                  std::invalid_argument);
}

TEST_CASE("default init sits one decade below the upper bound") {
  const double l10 = std::log(10.0);

  // Synthetic-style bounds (two decades wide): z lands exactly at 0.
  const Benchmark synthetic_like = toy_bench(2, 0.5 - 2.0 * l10, 0.5);
  const Eigen::VectorXd z = wlb::default_init(synthetic_like);
  CHECK((z.array().abs() <= 1e-12).all());
  const Eigen::VectorXd lam = wlb::from_search_space(synthetic_like, z);
  CHECK(lam[0] == doctest::Approx(-1.8026).epsilon(1e-4));
  CHECK(lam[0] == doctest::Approx(0.5 - l10).epsilon(1e-12));

  // Wider boxes keep the init strictly interior.
  for (const double decades : {2.0, 3.0, 5.0}) {
    const Benchmark b = toy_bench(2, 1.0 - decades * l10, 1.0);
    const Eigen::VectorXd zi = wlb::default_init(b);
    CHECK((zi.array() > -1.0).all());
    CHECK((zi.array() < 1.0).all());
    const Eigen::VectorXd li = wlb::from_search_space(b, zi);
    CHECK(li[0] == doctest::Approx(1.0 - l10).epsilon(1e-12));
  }
}

TEST_CASE("benchmark construction rejects bad bounds") {
  CHECK_THROWS_AS(toy_bench(2, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(toy_bench(2, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("presets carry the published shapes") {
  const auto simple = wlb::synthetic_preset("synt_simple");
  CHECK(simple.n == 30);
  CHECK(simple.d == 60);
  CHECK(simple.d_e == 3);
  CHECK(simple.snr == 10.0);
  CHECK(simple.name == "synt_simple");

  const auto medium = wlb::synthetic_preset("synt_medium");
  CHECK(medium.n == 50);
  CHECK(medium.d == 100);
  CHECK(medium.d_e == 5);

  const auto high = wlb::synthetic_preset("synt_high");
  CHECK(high.n == 150);
  CHECK(high.d == 300);
  CHECK(high.d_e == 15);

  const auto hard = wlb::synthetic_preset("synt_hard", true);
  CHECK(hard.n == 500);
  CHECK(hard.d == 1000);
  CHECK(hard.d_e == 50);
  CHECK(hard.snr == 3.0);
  CHECK(hard.name == "synt_hard_noisy");

  CHECK(wlb::is_synthetic_preset("synt_high"));
  CHECK(!wlb::is_synthetic_preset("synt_high_noisy"));
  CHECK_THROWS_AS(wlb::synthetic_preset("synt_enormous"),
                  std::invalid_argument);
}

TEST_CASE("ground truth is a sign-alternating block on the leading columns") {
  const Benchmark bench =
      wlb::make_synthetic(wlb::synthetic_preset("synt_simple"));
  REQUIRE(bench.beta_true().has_value());
  const Eigen::VectorXd& beta = *bench.beta_true();

  int nonzeros = 0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta[j] != 0.0) ++nonzeros;
  }
  CHECK(nonzeros == 3);
  // d=60, d_e=3: the first three entries carry magnitudes 1/3, 2/3, 1 with
  // alternating signs; everything past the block is exactly zero.
  CHECK(beta[0] == doctest::Approx(1.0 / 3.0));
  CHECK(beta[1] == doctest::Approx(-2.0 / 3.0));
  CHECK(beta[2] == doctest::Approx(1.0));
  CHECK(beta.tail(beta.size() - 3).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generation hits the requested snr exactly") {
  for (const bool noisy : {false, true}) {
    const auto spec = wlb::synthetic_preset("synt_simple", noisy);
    const Benchmark bench = wlb::make_synthetic(spec);
    const Eigen::VectorXd signal = bench.dataset().multiply(*bench.beta_true());
    const Eigen::VectorXd noise = bench.dataset().y() - signal;
    CHECK(signal.norm() / noise.norm() ==
          doctest::Approx(spec.snr).epsilon(1e-12));
  }
}

TEST_CASE("generation replays bit-identically") {
  const auto spec = wlb::synthetic_preset("synt_medium");
  const Benchmark a = wlb::make_synthetic(spec);
  const Benchmark b = wlb::make_synthetic(spec);

  const auto& xa = a.dataset().dense();
  const auto& xb = b.dataset().dense();
  REQUIRE(xa.size() == xb.size());
  CHECK(std::memcmp(xa.data(), xb.data(),
                    sizeof(double) * static_cast<std::size_t>(xa.size())) == 0);
  CHECK(std::memcmp(a.dataset().y().data(), b.dataset().y().data(),
                    sizeof(double) * static_cast<std::size_t>(a.n())) == 0);

  // A different seed moves the data.
  auto other = spec;
  other.seed = spec.seed + 1;
  const Benchmark c = wlb::make_synthetic(other);
  CHECK(std::memcmp(xa.data(), c.dataset().dense().data(),
                    sizeof(double) * static_cast<std::size_t>(xa.size())) != 0);
}

TEST_CASE("columns follow the ar(1) correlation profile") {
  SyntheticSpec spec;
  spec.n = 20000;
  spec.d = 8;
  spec.d_e = 2;
  spec.rho = 0.6;
  spec.seed = 7;
  spec.name = "corr_probe";
  const Benchmark bench = wlb::make_synthetic(spec);
  const auto& x = bench.dataset().dense();

  for (Eigen::Index i = 0; i < spec.d; ++i) {
    for (Eigen::Index j = i; j < spec.d && j - i <= 5; ++j) {
      const Eigen::VectorXd ci = x.col(i).array() - x.col(i).mean();
      const Eigen::VectorXd cj = x.col(j).array() - x.col(j).mean();
      const double corr = ci.dot(cj) / (ci.norm() * cj.norm());
      CHECK(std::abs(corr - std::pow(spec.rho, double(j - i))) <= 0.02);
    }
  }
}

TEST_CASE("independent columns under rho zero") {
  SyntheticSpec spec;
  spec.n = 10000;
  spec.d = 6;
  spec.d_e = 1;
  spec.rho = 0.0;
  spec.seed = 3;
  spec.name = "rho0_probe";
  const Benchmark bench = wlb::make_synthetic(spec);
  const auto& x = bench.dataset().dense();
  const double band = 4.0 / std::sqrt(10000.0);
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = i + 1; j < 6; ++j) {
      const Eigen::VectorXd ci = x.col(i).array() - x.col(i).mean();
      const Eigen::VectorXd cj = x.col(j).array() - x.col(j).mean();
      CHECK(std::abs(ci.dot(cj) / (ci.norm() * cj.norm())) <= band);
    }
  }
}

TEST_CASE("reference loss is positive, reproducible, and scales to one") {
  const Benchmark bench =
      wlb::make_synthetic(wlb::synthetic_preset("synt_simple"));
  REQUIRE(bench.reference_loss().has_value());
  CHECK(*bench.reference_loss() > 0.0);

  const Benchmark again =
      wlb::make_synthetic(wlb::synthetic_preset("synt_simple"));
  CHECK(*bench.reference_loss() == *again.reference_loss());

  // Using the ground truth as a fixed predictor reproduces the reference
  // exactly, so its scaled criterion is exactly one.
  const double at_truth =
      wlb::fixed_beta_cv_mse(bench.split(), *bench.beta_true());
  CHECK(at_truth / *bench.reference_loss() == 1.0);
}

TEST_CASE("spec validation") {
  SyntheticSpec spec;
  spec.n = 10;
  spec.d = 5;
  spec.d_e = 6;
  CHECK_THROWS_AS(wlb::make_synthetic(spec), std::invalid_argument);
  spec.d_e = 2;
  spec.rho = 1.0;
  CHECK_THROWS_AS(wlb::make_synthetic(spec), std::invalid_argument);
  spec.rho = 0.5;
  spec.snr = 0.0;
  CHECK_THROWS_AS(wlb::make_synthetic(spec), std::invalid_argument);
}

TEST_SUITE_END();
