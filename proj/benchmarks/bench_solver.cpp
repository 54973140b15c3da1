#include <benchmark/benchmark.h>

#include "wlb/benchmark.hpp"
#include "wlb/criteria.hpp"
#include "wlb/solver.hpp"

namespace {

// One full solve at a mid-range uniform penalty, the dominant inner kernel.
void BM_SolveWlasso(benchmark::State& state) {
  const auto preset = state.range(0) == 0 ? "synt_simple" : "synt_medium";
  const wlb::Benchmark bench =
      wlb::make_synthetic(wlb::synthetic_preset(preset));
  const wlb::PenaltyVector pen = wlb::PenaltyVector::uniform(
      bench.d(), bench.lam_max() - 1.0);

  for (auto _ : state) {
    auto sol = wlb::solve_wlasso(bench.dataset(), pen, {1e-4, 10000, {}});
    benchmark::DoNotOptimize(sol.beta.data());
  }
}
BENCHMARK(BM_SolveWlasso)->Arg(0)->Arg(1);

// Full K-fold criterion evaluation, cold start: the unit of work every
// optimizer pays per configuration.
void BM_CvLoss(benchmark::State& state) {
  const wlb::Benchmark bench =
      wlb::make_synthetic(wlb::synthetic_preset("synt_medium"));
  const wlb::PenaltyVector pen = wlb::PenaltyVector::uniform(
      bench.d(), bench.lam_max() - 1.0);
  const double tol = state.range(0) == 0 ? 1e-2 : 1e-4;

  for (auto _ : state) {
    auto value = wlb::cv_loss(bench.split(), pen, tol);
    benchmark::DoNotOptimize(value.loss);
  }
}
BENCHMARK(BM_CvLoss)->Arg(0)->Arg(1);

// Warm-started re-evaluation at a perturbed penalty: the grid-walk and
// line-search fast path.
void BM_CvLossWarm(benchmark::State& state) {
  const wlb::Benchmark bench =
      wlb::make_synthetic(wlb::synthetic_preset("synt_medium"));
  const double g = bench.lam_max() - 1.0;
  wlb::WarmState warm;
  wlb::cv_loss(bench.split(), wlb::PenaltyVector::uniform(bench.d(), g), 1e-4,
               &warm);

  for (auto _ : state) {
    auto value = wlb::cv_loss(
        bench.split(), wlb::PenaltyVector::uniform(bench.d(), g - 0.01), 1e-4,
        &warm);
    benchmark::DoNotOptimize(value.loss);
  }
}
BENCHMARK(BM_CvLossWarm);

}  // namespace

BENCHMARK_MAIN();
