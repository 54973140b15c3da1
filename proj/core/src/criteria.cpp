#include "wlb/criteria.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "wlb/rng.hpp"

namespace wlb {

namespace {

void check_cv_config(const CvConfig& cfg, Eigen::Index n) {
  if (cfg.k_folds < 2) {
    throw std::invalid_argument("k_folds must be at least 2");
  }
  if (static_cast<Eigen::Index>(cfg.k_folds) > n) {
    throw std::invalid_argument("k_folds exceeds the number of samples");
  }
  if (!(cfg.tol > 0.0)) {
    throw std::invalid_argument("cv tolerance must be positive");
  }
}

double validation_mse(const Dataset& val, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd r = val.y() - val.multiply(beta);
  return r.squaredNorm() / static_cast<double>(val.n());
}

}  // namespace

std::vector<FoldIndices> make_folds(Eigen::Index n, const CvConfig& cfg) {
  check_cv_config(cfg, n);

  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  RandomStream stream(cfg.fold_seed);
  stream.shuffle(perm);

  const Eigen::Index k = cfg.k_folds;
  const Eigen::Index base = n / k;
  const Eigen::Index rem = n % k;

  std::vector<FoldIndices> folds(static_cast<std::size_t>(k));
  Eigen::Index start = 0;
  for (Eigen::Index f = 0; f < k; ++f) {
    const Eigen::Index size = base + (f < rem ? 1 : 0);
    auto& fold = folds[static_cast<std::size_t>(f)];
    fold.val.assign(perm.begin() + start, perm.begin() + start + size);
    fold.train.reserve(static_cast<std::size_t>(n - size));
    fold.train.insert(fold.train.end(), perm.begin(), perm.begin() + start);
    fold.train.insert(fold.train.end(), perm.begin() + start + size, perm.end());
    std::sort(fold.val.begin(), fold.val.end());
    std::sort(fold.train.begin(), fold.train.end());
    start += size;
  }
  return folds;
}

CvSplit::CvSplit(const Dataset& ds, const CvConfig& cfg) : cfg_(cfg) {
  const auto indices = make_folds(ds.n(), cfg);
  folds_.reserve(indices.size());
  for (const auto& f : indices) {
    if (f.val.empty() || f.train.empty()) {
      throw std::invalid_argument("fold with no rows");
    }
    folds_.push_back({ds.subset_rows(f.train), ds.subset_rows(f.val)});
  }
}

FoldSolve solve_fold(const Dataset& train, const Dataset& val,
                     const PenaltyVector& pen, double tol,
                     const Eigen::VectorXd* warm) {
  SolverConfig cfg;
  cfg.tol = tol;
  if (warm != nullptr && warm->size() == train.d()) {
    cfg.warm_start = *warm;
  }
  FoldSolve out;
  out.sol = solve_wlasso(train, pen, cfg);
  out.cost = cd_cost_meter(out.sol, train);
  out.val_mse = validation_mse(val, out.sol.beta);
  return out;
}

CriterionValue cv_loss(const CvSplit& split, const PenaltyVector& pen,
                       double tol, WarmState* warm) {
  const int k = split.k();
  if (warm != nullptr && warm->fold_beta.empty()) {
    warm->fold_beta.resize(static_cast<std::size_t>(k));
  }
  if (warm != nullptr &&
      warm->fold_beta.size() != static_cast<std::size_t>(k)) {
    throw std::invalid_argument("warm state does not match fold count");
  }

  CriterionValue out;
  out.per_fold.resize(k);
  for (int f = 0; f < k; ++f) {
    const Eigen::VectorXd* w =
        warm != nullptr ? &warm->fold_beta[static_cast<std::size_t>(f)] : nullptr;
    FoldSolve fs = solve_fold(split.train(f), split.val(f), pen, tol, w);
    out.per_fold[f] = fs.val_mse;
    out.cost += fs.cost;
    if (warm != nullptr) {
      warm->fold_beta[static_cast<std::size_t>(f)] = std::move(fs.sol.beta);
    }
  }
  out.loss = out.per_fold.mean();
  return out;
}

CriterionValue cv_loss(const Dataset& ds, const PenaltyVector& pen,
                       const CvConfig& cfg) {
  CvSplit split(ds, cfg);
  return cv_loss(split, pen, cfg.tol);
}

double fixed_beta_cv_mse(const CvSplit& split, const Eigen::VectorXd& beta) {
  double total = 0.0;
  for (int f = 0; f < split.k(); ++f) {
    total += validation_mse(split.val(f), beta);
  }
  return total / static_cast<double>(split.k());
}

}  // namespace wlb
