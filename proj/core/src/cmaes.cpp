#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wlb/optimizers.hpp"

namespace wlb {

// Standard (mu/mu_w, lambda)-CMA-ES constants and update equations; only
// population size and initial sigma are exposed, everything else uses the
// published defaults.
struct CmaEs::Impl {
  Impl(Eigen::Index d, const CmaesConfig& cfg, std::uint64_t seed)
      : d(d), cfg(cfg), stream(seed) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    if (cfg.population < 2) {
      throw std::invalid_argument("population must be >= 2");
    }
    if (!(cfg.sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be > 0");

    lambda = cfg.population;
    mu = lambda / 2;
    weights.resize(mu);
    for (int i = 0; i < mu; ++i) {
      weights[i] = std::log(static_cast<double>(mu) + 0.5) -
                   std::log(static_cast<double>(i) + 1.0);
    }
    weights /= weights.sum();
    mu_eff = 1.0 / weights.squaredNorm();

    const double dd = static_cast<double>(d);
    c_sigma = (mu_eff + 2.0) / (dd + mu_eff + 5.0);
    d_sigma = 1.0 +
              2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (dd + 1.0)) - 1.0) +
              c_sigma;
    c_c = (4.0 + mu_eff / dd) / (dd + 4.0 + 2.0 * mu_eff / dd);
    c_1 = 2.0 / ((dd + 1.3) * (dd + 1.3) + mu_eff);
    c_mu = std::min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) /
                                   ((dd + 2.0) * (dd + 2.0) + mu_eff));
    chi_n = std::sqrt(dd) * (1.0 - 1.0 / (4.0 * dd) + 1.0 / (21.0 * dd * dd));

    mean = cfg.mean0.size() == 0 ? Eigen::VectorXd::Zero(d) : cfg.mean0;
    if (mean.size() != d) {
      throw std::invalid_argument("mean0 has wrong length");
    }
    sigma = cfg.sigma0;
    cov = Eigen::MatrixXd::Identity(d, d);
    p_sigma = Eigen::VectorXd::Zero(d);
    p_c = Eigen::VectorXd::Zero(d);
    refresh_eigen();
  }

  void refresh_eigen() {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("covariance eigendecomposition failed");
    }
    Eigen::VectorXd evals = es.eigenvalues();
    min_eigenvalue = evals.minCoeff();
    if (min_eigenvalue < cfg.eigen_floor) {
      floor_hit = true;
      evals = evals.cwiseMax(cfg.eigen_floor);
    }
    eigen_basis = es.eigenvectors();
    eigen_scale = evals.cwiseSqrt();
    inv_sqrt_cov = eigen_basis *
                   eigen_scale.cwiseInverse().asDiagonal() *
                   eigen_basis.transpose();
    last_eigen_generation = generation;
  }

  // Lazy eigendecomposition: O(d^3) amortized away per the usual schedule.
  void maybe_refresh_eigen() {
    const double interval =
        1.0 / ((c_1 + c_mu) * static_cast<double>(d) * 10.0);
    if (static_cast<double>(generation - last_eigen_generation) >= interval) {
      refresh_eigen();
    }
  }

  std::vector<Eigen::VectorXd> ask() {
    maybe_refresh_eigen();
    raw_samples.clear();
    raw_samples.reserve(static_cast<std::size_t>(lambda));
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(lambda));

    for (int i = 0; i < lambda; ++i) {
      Eigen::VectorXd raw(d);
      bool inside = false;
      for (int attempt = 0; attempt <= cfg.resample_limit; ++attempt) {
        Eigen::VectorXd zn(d);
        for (Eigen::Index j = 0; j < d; ++j) zn[j] = stream.normal();
        raw = mean + sigma * (eigen_basis *
                              (eigen_scale.cwiseProduct(zn)));
        inside = raw.minCoeff() >= -1.0 && raw.maxCoeff() <= 1.0;
        if (inside) break;
      }
      raw_samples.push_back(raw);
      // After exhausting resamples, evaluate the clipped image; the raw
      // sample still drives the state update in tell().
      out.push_back(inside ? raw
                           : raw.cwiseMax(-1.0).cwiseMin(1.0).eval());
    }
    return out;
  }

  void tell(const std::vector<double>& losses) {
    if (losses.size() != raw_samples.size()) {
      throw std::invalid_argument("tell batch does not match last ask batch");
    }

    // Rank ascending by loss; stable to break ties by ask order.
    std::vector<int> order(losses.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return losses[static_cast<std::size_t>(a)] <
             losses[static_cast<std::size_t>(b)];
    });

    const Eigen::VectorXd old_mean = mean;
    Eigen::VectorXd new_mean = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < mu; ++i) {
      new_mean += weights[i] * raw_samples[static_cast<std::size_t>(order[i])];
    }

    const Eigen::VectorXd mean_shift = (new_mean - old_mean) / sigma;
    p_sigma = (1.0 - c_sigma) * p_sigma +
              std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) *
                  (inv_sqrt_cov * mean_shift);

    const double expected_decay =
        std::sqrt(1.0 - std::pow(1.0 - c_sigma,
                                 2.0 * static_cast<double>(generation + 1)));
    const bool h_sigma =
        p_sigma.norm() / expected_decay <
        (1.4 + 2.0 / (static_cast<double>(d) + 1.0)) * chi_n;

    p_c = (1.0 - c_c) * p_c;
    if (h_sigma) {
      p_c += std::sqrt(c_c * (2.0 - c_c) * mu_eff) * mean_shift;
    }

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < mu; ++i) {
      const Eigen::VectorXd y =
          (raw_samples[static_cast<std::size_t>(order[i])] - old_mean) / sigma;
      rank_mu.noalias() += weights[i] * (y * y.transpose());
    }
    const double rank_one_correction =
        h_sigma ? 0.0 : c_1 * c_c * (2.0 - c_c);
    cov = (1.0 - c_1 - c_mu + rank_one_correction) * cov +
          c_1 * (p_c * p_c.transpose()) + c_mu * rank_mu;

    sigma *= std::exp((c_sigma / d_sigma) * (p_sigma.norm() / chi_n - 1.0));
    mean = new_mean;
    ++generation;
  }

  Eigen::Index d;
  CmaesConfig cfg;
  RandomStream stream;

  int lambda = 0, mu = 0;
  Eigen::VectorXd weights;
  double mu_eff = 0, c_sigma = 0, d_sigma = 0, c_c = 0, c_1 = 0, c_mu = 0,
         chi_n = 0;

  Eigen::VectorXd mean;
  double sigma = 0;
  Eigen::MatrixXd cov;
  Eigen::VectorXd p_sigma, p_c;
  int generation = 0;

  Eigen::MatrixXd eigen_basis, inv_sqrt_cov;
  Eigen::VectorXd eigen_scale;
  int last_eigen_generation = 0;
  double min_eigenvalue = 1.0;
  bool floor_hit = false;

  std::vector<Eigen::VectorXd> raw_samples;
};

CmaEs::CmaEs(Eigen::Index d, const CmaesConfig& cfg, std::uint64_t seed)
    : impl_(std::make_unique<Impl>(d, cfg, seed)) {}
CmaEs::~CmaEs() = default;

Eigen::Index CmaEs::dimension() const { return impl_->d; }
std::vector<Eigen::VectorXd> CmaEs::ask() { return impl_->ask(); }
void CmaEs::tell(const std::vector<Eigen::VectorXd>& points,
                 const std::vector<double>& losses) {
  if (points.size() != impl_->raw_samples.size()) {
    throw std::invalid_argument("tell batch does not match last ask batch");
  }
  impl_->tell(losses);
}

const Eigen::VectorXd& CmaEs::mean() const { return impl_->mean; }
double CmaEs::sigma() const { return impl_->sigma; }
int CmaEs::generation() const { return impl_->generation; }
double CmaEs::min_eigenvalue() const { return impl_->min_eigenvalue; }
bool CmaEs::eigen_floor_hit() const { return impl_->floor_hit; }

std::vector<EvalRecord> cmaes(const Benchmark& bench, int budget,
                              const CmaesConfig& cfg, std::uint64_t seed) {
  if (budget < cfg.population) {
    throw std::invalid_argument("budget must cover at least one generation");
  }

  CmaesConfig local = cfg;
  if (local.mean0.size() == 0) local.mean0 = default_init(bench);
  CmaEs opt(bench.d(), local, seed);
  Evaluator ev(bench, seed);
  const FidelitySpec fid = bench.fidelity().highest();

  while (static_cast<int>(ev.n_evals()) < budget) {
    auto batch = opt.ask();
    std::vector<double> losses;
    losses.reserve(batch.size());
    for (const auto& z : batch) {
      losses.push_back(ev.evaluate_z(z, fid).loss);
      if (static_cast<int>(ev.n_evals()) >= budget) break;
    }
    if (losses.size() < batch.size()) break;  // budget cut mid-generation
    opt.tell(batch, losses);
  }
  return ev.take_trajectory();
}

}  // namespace wlb
