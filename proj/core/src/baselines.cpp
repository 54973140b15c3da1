#include "wlb/baselines.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "wlb/libsvm.hpp"
#include "wlb/rng.hpp"

namespace wlb {

namespace {

void finalize(const Benchmark& bench, Evaluator& ev, BaselineResult& out) {
  const EvalRecord* best = ev.best();
  if (best == nullptr) {
    throw std::logic_error("baseline produced no evaluations");
  }
  out.best_loss = best->loss;
  out.best_lam = from_search_space(bench, best->z);
  out.trajectory = ev.take_trajectory();

  SolverConfig cfg;
  cfg.tol = bench.criterion().tol;
  out.refit_beta =
      solve_wlasso(bench.dataset(), PenaltyVector{out.best_lam}, cfg).beta;
}

}  // namespace

std::vector<double> GridSpec::points() const {
  if (n_points < 1) {
    throw std::invalid_argument("grid needs at least one point");
  }
  if (n_points > 1 && !(lo < hi)) {
    throw std::invalid_argument("grid bounds must satisfy lo < hi");
  }
  std::vector<double> pts(static_cast<std::size_t>(n_points));
  if (n_points == 1) {
    pts[0] = lo;
    return pts;
  }
  const double step = (hi - lo) / static_cast<double>(n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    pts[static_cast<std::size_t>(i)] = lo + step * static_cast<double>(i);
  }
  pts.back() = hi;  // guard against accumulation error at the endpoint
  return pts;
}

BaselineResult lasso_cv(const Benchmark& bench, const GridSpec& grid) {
  Evaluator ev(bench, 0);
  WarmState warm;  // carried down the grid, per fold
  auto pts = grid.points();
  // Largest penalty first: solutions grow smoothly from the sparse end.
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    ev.evaluate_lambda_at_tol(Eigen::VectorXd::Constant(bench.d(), *it),
                              bench.criterion().tol, &warm);
  }
  BaselineResult out;
  finalize(bench, ev, out);
  return out;
}

BaselineResult adaptive_lasso_cv(const Benchmark& bench, const GridSpec& grid,
                                 int n_reweight, double eps) {
  if (n_reweight < 1) throw std::invalid_argument("n_reweight must be >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");

  const double tol = bench.criterion().tol;
  Evaluator ev(bench, 0);
  auto pts = grid.points();

  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    const double g = *it;
    // beta^(0): plain Lasso at the scalar grid point, fit per fold by the
    // evaluation itself; the reweighting below needs full-data coefficients,
    // so those are tracked on the full dataset.
    SolverConfig scfg;
    scfg.tol = tol;
    Eigen::VectorXd lam = Eigen::VectorXd::Constant(bench.d(), g);
    Eigen::VectorXd beta =
        solve_wlasso(bench.dataset(), PenaltyVector{lam}, scfg).beta;
    for (int t = 0; t < n_reweight; ++t) {
      lam = (g - (beta.array().abs() + eps).log()).matrix();
      scfg.warm_start = beta;
      beta = solve_wlasso(bench.dataset(), PenaltyVector{lam}, scfg).beta;
    }
    ev.evaluate_lambda_at_tol(lam, tol);
  }

  BaselineResult out;
  finalize(bench, ev, out);
  return out;
}

namespace {

struct FoldGradient {
  Eigen::VectorXd grad;
  double val_mse = 0.0;  // from the cold solve, so it matches cv_loss exactly
  bool regularized = false;
  bool support_unstable = false;
  std::uint64_t cost = 0;
};

// Gradient contribution of one fold via implicit differentiation on the
// active set. If re-solving disagrees on the support, the solve is retried
// at 10x tighter tolerance (the implicit function theorem needs a locally
// stable support).
FoldGradient fold_gradient(const Dataset& train, const Dataset& val,
                           const PenaltyVector& pen, double tol) {
  FoldGradient out;
  out.grad = Eigen::VectorXd::Zero(train.d());

  FoldSolve first = solve_fold(train, val, pen, tol);
  out.cost += first.cost;
  out.val_mse = first.val_mse;
  FoldSolve second = solve_fold(train, val, pen, tol, &first.sol.beta);
  out.cost += second.cost;
  if (second.sol.support != first.sol.support) {
    out.support_unstable = true;
    FoldSolve tighter = solve_fold(train, val, pen, tol * 0.1);
    out.cost += tighter.cost;
    second = std::move(tighter);
  }
  const WLassoSolution& sol = second.sol;
  if (sol.support.empty()) {
    return out;  // flat region: beta stays 0 under any lambda perturbation
  }

  const auto s = static_cast<Eigen::Index>(sol.support.size());
  const Eigen::MatrixXd Xs = train.columns_dense(sol.support);
  Eigen::MatrixXd gram = Xs.transpose() * Xs;

  // d(beta_S)/d(lam_S) solves  gram * J = -n_train * diag(w_j sign(beta_j)).
  Eigen::VectorXd rhs_diag(s);
  const Eigen::VectorXd weights = pen.weights();
  for (Eigen::Index i = 0; i < s; ++i) {
    const Eigen::Index j = sol.support[static_cast<std::size_t>(i)];
    rhs_diag[i] = -static_cast<double>(train.n()) * weights[j] *
                  (sol.beta[j] > 0.0 ? 1.0 : -1.0);
  }

  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    // Rank-deficient active set (|S| > n or collinear columns): ridge bump.
    const double bump = 1e-10 * (gram.trace() / static_cast<double>(s) + 1.0);
    gram.diagonal().array() += bump;
    ldlt.compute(gram);
    out.regularized = true;
    if (ldlt.info() != Eigen::Success) {
      throw std::runtime_error("hypergradient normal equations failed");
    }
  }

  Eigen::VectorXd beta_s(s);
  for (Eigen::Index i = 0; i < s; ++i) {
    beta_s[i] = sol.beta[sol.support[static_cast<std::size_t>(i)]];
  }
  const Eigen::MatrixXd Xval_s = val.columns_dense(sol.support);
  const Eigen::VectorXd grad_beta = (2.0 / static_cast<double>(val.n())) *
                                    (Xval_s.transpose() *
                                     (Xval_s * beta_s - val.y()));

  // grad_S = J' * grad_beta with J = ldlt_solve(diag(rhs)) column-wise;
  // equivalently rhs_diag .* (gram^{ -1} grad_beta).
  const Eigen::VectorXd solved = ldlt.solve(grad_beta);
  for (Eigen::Index i = 0; i < s; ++i) {
    out.grad[sol.support[static_cast<std::size_t>(i)]] = rhs_diag[i] * solved[i];
  }
  return out;
}

}  // namespace

HypergradResult sparse_ho_gradient(const Benchmark& bench,
                                   const PenaltyVector& pen,
                                   const SparseHoConfig& cfg) {
  const CvSplit& split = bench.split();
  const int k = split.k();

  HypergradResult out;
  out.grad = Eigen::VectorXd::Zero(bench.d());
  Eigen::VectorXd per_fold(k);
  for (int f = 0; f < k; ++f) {
    FoldGradient fg =
        fold_gradient(split.train(f), split.val(f), pen, cfg.inner_tol);
    out.grad += fg.grad;
    out.cost += fg.cost;
    out.regularized = out.regularized || fg.regularized;
    out.support_unstable = out.support_unstable || fg.support_unstable;
    per_fold[f] = fg.val_mse;
  }
  out.grad /= static_cast<double>(k);
  out.loss = per_fold.mean();
  return out;
}

namespace {

// One descent leg; shared by sparse_ho and the multi-start driver. Evaluates
// through `ev` so ordinals and budget accounting stay global, stops early
// when eval_budget (if >= 0) is exhausted.
void sparse_ho_leg(const Benchmark& bench, const SparseHoConfig& cfg,
                   Eigen::VectorXd lam, int max_iters, Evaluator& ev,
                   long eval_budget) {
  const auto spent = [&] {
    return eval_budget >= 0 &&
           static_cast<long>(ev.n_evals()) >= eval_budget;
  };
  if (spent()) return;

  const double width = bench.lam_max() - bench.lam_min();
  auto clip = [&](Eigen::VectorXd v) {
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      v[j] = std::clamp(v[j], bench.lam_min(), bench.lam_max());
    }
    return v;
  };

  lam = clip(std::move(lam));
  HypergradResult hg = sparse_ho_gradient(bench, PenaltyVector{lam}, cfg);
  ev.evaluate_lambda_at_tol(lam, cfg.inner_tol);
  if (spent()) return;

  for (int iter = 0; iter < max_iters; ++iter) {
    const double grad_sq = hg.grad.squaredNorm();
    if (grad_sq == 0.0) return;  // stationary (e.g. empty support everywhere)

    double step = cfg.step_rule.initial_step;
    bool accepted = false;
    Eigen::VectorXd candidate;
    double cand_loss = 0.0;
    for (int h = 0; h <= cfg.step_rule.max_halvings; ++h) {
      candidate = clip(lam - step * hg.grad);
      if ((candidate - lam).lpNorm<Eigen::Infinity>() < 1e-15 * width) {
        break;  // clipped into the current point; smaller steps won't help
      }
      const EvalRecord& rec =
          ev.evaluate_lambda_at_tol(candidate, cfg.inner_tol);
      cand_loss = rec.raw_loss;
      if (cand_loss <= hg.loss - cfg.step_rule.slope * step * grad_sq) {
        accepted = true;
        break;
      }
      if (spent()) return;
      step *= cfg.step_rule.shrink;
      if (step < 1e-10) break;
    }
    if (!accepted) return;  // step collapse
    if (spent()) return;

    lam = std::move(candidate);
    hg = sparse_ho_gradient(bench, PenaltyVector{lam}, cfg);
    hg.loss = cand_loss;  // same point, already evaluated
  }
}

Eigen::VectorXd initial_lambda(const Benchmark& bench,
                               const SparseHoConfig& cfg) {
  if (cfg.init_z.size() == 0) {
    return from_search_space(bench, default_init(bench));
  }
  if (cfg.init_z.size() != bench.d()) {
    throw std::invalid_argument("init vector has wrong length");
  }
  return from_search_space(bench, cfg.init_z);
}

void check_config(const SparseHoConfig& cfg) {
  if (cfg.max_outer_iters < 1) {
    throw std::invalid_argument("max_outer_iters must be >= 1");
  }
  if (cfg.restart_period < 1) {
    throw std::invalid_argument("restart_period must be >= 1");
  }
  if (!(cfg.inner_tol > 0.0)) {
    throw std::invalid_argument("inner_tol must be positive");
  }
}

}  // namespace

BaselineResult sparse_ho(const Benchmark& bench, const SparseHoConfig& cfg) {
  check_config(cfg);
  Evaluator ev(bench, 0);
  sparse_ho_leg(bench, cfg, initial_lambda(bench, cfg), cfg.max_outer_iters,
                ev, -1);
  BaselineResult out;
  finalize(bench, ev, out);
  return out;
}

BaselineResult multi_start_sparse_ho(const Benchmark& bench,
                                     const SparseHoConfig& cfg, int budget,
                                     std::uint64_t seed) {
  check_config(cfg);
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");

  Evaluator ev(bench, seed);
  RandomStream restarts(seed);

  // First leg from the heuristic init, then uniform scalar restarts; each
  // leg runs restart_period outer iterations (or collapses earlier).
  sparse_ho_leg(bench, cfg, initial_lambda(bench, cfg), cfg.restart_period, ev,
                budget);
  while (static_cast<long>(ev.n_evals()) < budget) {
    const double u = restarts.uniform(bench.lam_min(), bench.lam_max());
    sparse_ho_leg(bench, cfg, Eigen::VectorXd::Constant(bench.d(), u),
                  cfg.restart_period, ev, budget);
  }

  BaselineResult out;
  finalize(bench, ev, out);
  return out;
}

int estimate_effective_dim(const Benchmark& bench, int budget,
                           std::uint64_t seed) {
  if (budget < 1) {
    throw std::invalid_argument("effective-dimension estimate needs budget >= 1");
  }
  SparseHoConfig cfg;
  const BaselineResult res = multi_start_sparse_ho(bench, cfg, budget, seed);
  int nonzeros = 0;
  for (Eigen::Index j = 0; j < res.refit_beta.size(); ++j) {
    if (res.refit_beta[j] != 0.0) ++nonzeros;
  }
  return nonzeros;
}

}  // namespace wlb
