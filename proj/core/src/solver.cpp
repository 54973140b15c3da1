#include "wlb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wlb {

namespace {

void check_inputs(const Dataset& ds, const PenaltyVector& pen,
                  const SolverConfig& cfg) {
  if (pen.size() != ds.d()) {
    throw std::invalid_argument("penalty vector has wrong length");
  }
  if (!pen.lam.allFinite()) {
    throw std::invalid_argument("penalty vector contains a non-finite value");
  }
  if (!(cfg.tol > 0.0)) {
    throw std::invalid_argument("solver tolerance must be positive");
  }
  if (cfg.max_passes < 1) {
    throw std::invalid_argument("max_passes must be at least 1");
  }
  if (cfg.warm_start && cfg.warm_start->size() != ds.d()) {
    throw std::invalid_argument("warm start vector has wrong length");
  }
}

// Gap evaluated from an explicit residual; shared by the public duality_gap
// and the in-loop stop check so the two always agree arithmetically.
double gap_from_residual(const Dataset& ds, const Eigen::VectorXd& weights,
                         const Eigen::VectorXd& beta,
                         const Eigen::VectorXd& r) {
  const double n = static_cast<double>(ds.n());
  const Eigen::VectorXd xtr = ds.multiply_transpose(r);

  double scale = 1.0;
  for (Eigen::Index j = 0; j < ds.d(); ++j) {
    scale = std::max(scale, std::abs(xtr[j]) / (n * weights[j]));
  }

  const double primal =
      r.squaredNorm() / (2.0 * n) + weights.dot(beta.cwiseAbs());
  const double dual = ds.y().squaredNorm() / (2.0 * n) -
                      (r / scale - ds.y()).squaredNorm() / (2.0 * n);
  return primal - dual;
}

}  // namespace

double soft_threshold(double x, double threshold) {
  if (x > threshold) return x - threshold;
  if (x < -threshold) return x + threshold;
  return 0.0;
}

double primal_objective(const Dataset& ds, const PenaltyVector& pen,
                        const Eigen::VectorXd& beta) {
  if (pen.size() != ds.d() || beta.size() != ds.d()) {
    throw std::invalid_argument("dimension mismatch in primal_objective");
  }
  const Eigen::VectorXd r = ds.y() - ds.multiply(beta);
  return r.squaredNorm() / (2.0 * static_cast<double>(ds.n())) +
         pen.weights().dot(beta.cwiseAbs());
}

double duality_gap(const Dataset& ds, const PenaltyVector& pen,
                   const Eigen::VectorXd& beta) {
  if (pen.size() != ds.d() || beta.size() != ds.d()) {
    throw std::invalid_argument("dimension mismatch in duality_gap");
  }
  const Eigen::VectorXd r = ds.y() - ds.multiply(beta);
  return gap_from_residual(ds, pen.weights(), beta, r);
}

WLassoSolution solve_wlasso(const Dataset& ds, const PenaltyVector& pen,
                            const SolverConfig& cfg) {
  check_inputs(ds, pen, cfg);

  const Eigen::Index d = ds.d();
  const double n = static_cast<double>(ds.n());
  const Eigen::VectorXd& norms_sq = ds.column_norms_sq();
  const Eigen::VectorXd weights = pen.weights();

  Eigen::VectorXd beta =
      cfg.warm_start ? *cfg.warm_start : Eigen::VectorXd::Zero(d);
  // Zero-norm columns cannot influence the fit; pin them to zero.
  for (Eigen::Index j = 0; j < d; ++j) {
    if (norms_sq[j] == 0.0) beta[j] = 0.0;
  }

  Eigen::VectorXd r = ds.y() - ds.multiply(beta);
  const double gap_target = cfg.tol * ds.y().squaredNorm() / n;

  WLassoSolution sol;
  sol.gap = std::numeric_limits<double>::infinity();

  for (int pass = 1; pass <= cfg.max_passes; ++pass) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (norms_sq[j] == 0.0) continue;
      const double z = beta[j] + ds.column_dot(j, r) / norms_sq[j];
      const double next = soft_threshold(z, n * weights[j] / norms_sq[j]);
      if (next != beta[j]) {
        ds.add_column(j, beta[j] - next, r);
        beta[j] = next;
      }
    }
    sol.n_passes = pass;

    // Gap checks at passes 1, 11, 21, ... and on the last permitted pass;
    // checking the very first pass lets warm starts exit immediately.
    if (pass % 10 == 1 || pass == cfg.max_passes) {
      r = ds.y() - ds.multiply(beta);  // drop accumulated drift
      sol.gap = gap_from_residual(ds, weights, beta, r);
      if (!std::isfinite(sol.gap)) {
        throw std::runtime_error("coordinate descent diverged (non-finite gap)");
      }
      if (sol.gap <= gap_target) break;
    }
  }

  sol.primal = r.squaredNorm() / (2.0 * n) + weights.dot(beta.cwiseAbs());
  sol.beta = std::move(beta);
  for (Eigen::Index j = 0; j < d; ++j) {
    if (sol.beta[j] != 0.0) sol.support.push_back(j);
  }
  return sol;
}

std::uint64_t cd_cost_meter(const WLassoSolution& sol, const Dataset& ds) {
  return static_cast<std::uint64_t>(sol.n_passes) *
         static_cast<std::uint64_t>(ds.n()) *
         static_cast<std::uint64_t>(ds.d());
}

double lambda_max(const Dataset& ds) {
  const Eigen::VectorXd xty = ds.multiply_transpose(ds.y());
  const double top = xty.cwiseAbs().maxCoeff();
  if (top <= 0.0) {
    throw std::domain_error("X'y is identically zero; lambda_max undefined");
  }
  double lam = std::log(top / static_cast<double>(ds.n()));

  // The returned value must actually zero every coordinate-descent update
  // from a zero start, but exp(log(m)) can land a few ulps below m and leave
  // the argmax coordinate fractionally over its threshold. Nudge upward until
  // the solver's own zero test holds, reproducing its arithmetic exactly
  // (same weights() exp path, same column_dot); this stays within ~2 ulps of
  // the formula value.
  const double n = static_cast<double>(ds.n());
  const Eigen::VectorXd& norms_sq = ds.column_norms_sq();
  auto zeroes_everything = [&](double candidate) {
    const Eigen::VectorXd weights =
        PenaltyVector::uniform(ds.d(), candidate).weights();
    for (Eigen::Index j = 0; j < ds.d(); ++j) {
      if (norms_sq[j] == 0.0) continue;
      const double z = ds.column_dot(j, ds.y()) / norms_sq[j];
      if (soft_threshold(z, n * weights[j] / norms_sq[j]) != 0.0) return false;
    }
    return true;
  };
  while (!zeroes_everything(lam)) {
    lam = std::nextafter(lam, std::numeric_limits<double>::infinity());
  }
  return lam;
}

}  // namespace wlb
