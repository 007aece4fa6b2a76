#include "hawkes/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "hawkes/integration.hpp"
#include "hawkes/model.hpp"
#include "hawkes/reparam.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/stability.hpp"

namespace hawkes {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogTwoPi = 1.8378770664093453;

double log_uniform_box(double x, double upper) {
  if (!(x > 0.0) || !(x < upper)) return kNegInf;
  return -std::log(upper);
}

// K induced by K*; nullopt when (K* + I) is singular.
std::optional<Matrix> induced_k(const Matrix& k_star) {
  try {
    return kstar_to_k(k_star);
  } catch (const SingularMatrixError&) {
    return std::nullopt;
  }
}

ModelParams params_from(const PosteriorSample& theta, const Matrix& k) {
  ModelParams p;
  p.mu = theta.mu;
  p.k = k;
  p.beta_diag = theta.beta_diag;
  p.beta_off = theta.beta_off;
  return p;
}

// Scalar random-walk block with Robbins-Monro step-size adaptation.
struct ScalarAdapt {
  double log_sigma = std::log(0.1);
  std::size_t attempts = 0;

  double sigma() const { return std::exp(log_sigma); }

  void update(double alpha, double target) {
    ++attempts;
    log_sigma += std::pow(static_cast<double>(attempts), -0.6) * (alpha - target);
    log_sigma = std::clamp(log_sigma, std::log(1e-8), std::log(1e4));
  }
};

// Online mean/covariance of the flattened K* draws seen during warmup.
struct RunningCovariance {
  std::size_t d = 0;
  std::size_t n = 0;
  std::vector<double> mean;
  Matrix m2;

  explicit RunningCovariance(std::size_t dim) : d(dim), mean(dim, 0.0), m2(dim) {}

  void add(const std::vector<double>& x) {
    ++n;
    std::vector<double> dx(d);
    for (std::size_t i = 0; i < d; ++i) dx[i] = x[i] - mean[i];
    for (std::size_t i = 0; i < d; ++i) mean[i] += dx[i] / static_cast<double>(n);
    for (std::size_t i = 0; i < d; ++i) {
      const double after = x[i] - mean[i];
      for (std::size_t j = 0; j < d; ++j) m2(i, j) += dx[j] * after;
    }
  }

  Matrix covariance() const {
    Matrix cov = m2;
    const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
    for (double& v : cov.data()) v /= denom;
    return cov;
  }
};

struct ChainWorker {
  const EventData& data;
  const PriorSpec& spec;
  const McmcConfig& cfg;
  SegmentGrid grid;
  std::size_t m;
  std::size_t d;  // M^2

  PosteriorSample theta;
  double cur_prior = 0.0;
  double cur_lik = 0.0;

  RngStream rng{0};

  std::vector<ScalarAdapt> mu_adapt;
  ScalarAdapt beta_diag_adapt;
  ScalarAdapt beta_off_adapt;
  std::vector<ScalarAdapt> xi_adapt;
  ScalarAdapt kstar_adapt;
  RunningCovariance kstar_cov;
  Matrix proposal_chol;
  bool chol_ready = false;

  std::size_t warmup_attempts = 0;
  std::size_t warmup_accepts = 0;

  ChainWorker(const EventData& data_, const PriorSpec& spec_, const McmcConfig& cfg_)
      : data(data_),
        spec(spec_),
        cfg(cfg_),
        grid(SegmentGrid::from_events(data_)),
        m(data_.dims()),
        d(data_.dims() * data_.dims()),
        mu_adapt(data_.dims()),
        xi_adapt(data_.dims() * data_.dims()),
        kstar_cov(data_.dims() * data_.dims()),
        proposal_chol(Matrix::identity(data_.dims() * data_.dims())) {
    kstar_adapt.log_sigma = std::log(0.05);
  }

  double likelihood_at(const PosteriorSample& t, const Matrix& k) const {
    const ModelParams p = params_from(t, k);
    const LikelihoodTerms terms = likelihood_terms(p, data, grid);
    if (terms.zero_intensity) return kNegInf;
    return terms.sum_log_intensity - terms.compensator;
  }

  void init(std::uint64_t chain_seed) {
    rng = RngStream(chain_seed);
    theta.mu.assign(m, 0.0);
    const auto counts = data.counts();
    for (std::size_t i = 0; i < m; ++i) {
      const double rate = static_cast<double>(counts[i]) / std::max(data.t_max, 1e-12);
      theta.mu[i] = std::clamp(rate, 1e-3 * spec.mu_upper, 0.99 * spec.mu_upper);
      mu_adapt[i].log_sigma = std::log(std::max(0.1 * theta.mu[i], 1e-3));
    }
    theta.k_star = Matrix(m);
    theta.beta_diag = std::min(1.0, 0.5 * spec.beta_upper);
    theta.beta_off = theta.beta_diag;
    theta.xi = Matrix(m, 1.0);

    cur_prior = log_prior(theta, spec);
    cur_lik = likelihood_at(theta, Matrix(m));  // K* = 0 induces K = 0
    if (!std::isfinite(cur_prior) || !std::isfinite(cur_lik)) {
      throw McmcDiagnosticsError("initial state has non-finite posterior");
    }
  }

  // Generic accept step for a likelihood-affecting proposal.
  bool metropolis(const PosteriorSample& proposed, double& alpha_out) {
    const double prop_prior = log_prior(proposed, spec);
    if (!std::isfinite(prop_prior)) {
      alpha_out = 0.0;
      return false;
    }
    const auto k = spec.fix_kstar_zero ? std::optional<Matrix>(Matrix(m))
                                       : induced_k(proposed.k_star);
    if (!k) {
      alpha_out = 0.0;
      return false;
    }
    const double prop_lik = likelihood_at(proposed, *k);
    if (!std::isfinite(prop_lik)) {
      alpha_out = 0.0;
      return false;
    }
    const double log_ratio = prop_prior + prop_lik - cur_prior - cur_lik;
    alpha_out = std::min(1.0, std::exp(std::min(0.0, log_ratio)));
    if (std::log(rng.uniform()) <= log_ratio) {
      theta = proposed;
      cur_prior = prop_prior;
      cur_lik = prop_lik;
      return true;
    }
    return false;
  }

  void track(bool accepted, bool warmup) {
    if (!warmup) return;
    ++warmup_attempts;
    if (accepted) ++warmup_accepts;
  }

  void update_beta(bool diagonal, bool warmup) {
    PosteriorSample proposed = theta;
    ScalarAdapt& adapt = diagonal ? beta_diag_adapt : beta_off_adapt;
    double& slot = diagonal ? proposed.beta_diag : proposed.beta_off;
    slot += adapt.sigma() * rng.normal();
    double alpha = 0.0;
    const bool acc = metropolis(proposed, alpha);
    track(acc, warmup);
    if (warmup) adapt.update(alpha, 0.44);
  }

  void update_mu(std::size_t i, bool warmup) {
    PosteriorSample proposed = theta;
    proposed.mu[i] += mu_adapt[i].sigma() * rng.normal();
    double alpha = 0.0;
    const bool acc = metropolis(proposed, alpha);
    track(acc, warmup);
    if (warmup) mu_adapt[i].update(alpha, 0.44);
  }

  void update_kstar(bool warmup) {
    std::vector<double> z(d);
    for (double& v : z) v = rng.normal();
    PosteriorSample proposed = theta;
    const double s = kstar_adapt.sigma();
    for (std::size_t i = 0; i < d; ++i) {
      double step = 0.0;
      for (std::size_t j = 0; j <= i; ++j) step += proposal_chol(i, j) * z[j];
      proposed.k_star.data()[i] += s * step;
    }
    double alpha = 0.0;
    const bool acc = metropolis(proposed, alpha);
    track(acc, warmup);
    if (warmup) {
      kstar_adapt.update(alpha, 0.234);
      kstar_cov.add(theta.k_star.data());
      if (kstar_cov.n >= 10 * d && kstar_cov.n % 100 == 0) refresh_chol();
    }
  }

  void refresh_chol() {
    Matrix cov = kstar_cov.covariance();
    double trace = 0.0;
    for (std::size_t i = 0; i < d; ++i) trace += cov(i, i);
    const double jitter = 1e-8 + 1e-6 * trace / static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i) cov(i, i) += jitter;
    try {
      proposal_chol = cholesky(cov);
      if (!chol_ready) {
        // Re-center the step scale on the classic d-dimensional default
        // when switching from the identity proposal.
        kstar_adapt.log_sigma = std::log(2.38 / std::sqrt(static_cast<double>(d)));
        chol_ready = true;
      }
    } catch (const SingularMatrixError&) {
      // Keep the previous factor until the covariance becomes usable.
    }
  }

  // Horseshoe scale update on the log scale; prior-only, the likelihood
  // does not involve xi.
  void update_xi(std::size_t idx, bool warmup) {
    PosteriorSample proposed = theta;
    const double old_xi = theta.xi.data()[idx];
    const double new_xi = old_xi * std::exp(xi_adapt[idx].sigma() * rng.normal());
    proposed.xi.data()[idx] = new_xi;
    const double prop_prior = log_prior(proposed, spec);
    double alpha = 0.0;
    if (std::isfinite(prop_prior)) {
      const double log_ratio =
          prop_prior - cur_prior + std::log(new_xi) - std::log(old_xi);
      alpha = std::min(1.0, std::exp(std::min(0.0, log_ratio)));
      if (std::log(rng.uniform()) <= log_ratio) {
        theta = proposed;
        cur_prior = prop_prior;
      }
    }
    if (warmup) xi_adapt[idx].update(alpha, 0.44);
  }

  void sweep(bool warmup) {
    for (std::size_t i = 0; i < m; ++i) update_mu(i, warmup);
    update_beta(true, warmup);
    update_beta(false, warmup);
    if (!spec.fix_kstar_zero) {
      update_kstar(warmup);
      if (spec.kstar_prior == KstarPrior::kHorseshoe) {
        for (std::size_t idx = 0; idx < d; ++idx) update_xi(idx, warmup);
      }
    }
  }

  std::vector<PosteriorSample> run(std::uint64_t chain_seed) {
    init(chain_seed);
    for (std::size_t it = 0; it < cfg.n_warmup; ++it) sweep(true);
    if (warmup_attempts > 0 &&
        static_cast<double>(warmup_accepts) < 0.001 * static_cast<double>(warmup_attempts)) {
      throw McmcDiagnosticsError("sampler rejected essentially all warmup proposals");
    }
    std::vector<PosteriorSample> draws;
    draws.reserve(cfg.n_draws);
    const std::size_t thin = std::max<std::size_t>(1, cfg.thin);
    for (std::size_t n = 0; n < cfg.n_draws; ++n) {
      for (std::size_t s = 0; s < thin; ++s) sweep(false);
      PosteriorSample out = theta;
      out.log_posterior = cur_prior + cur_lik;
      draws.push_back(std::move(out));
    }
    return draws;
  }
};

}  // namespace

double log_prior(const PosteriorSample& theta, const PriorSpec& spec) {
  double lp = 0.0;
  for (double mu : theta.mu) {
    const double term = log_uniform_box(mu, spec.mu_upper);
    if (!std::isfinite(term)) return kNegInf;
    lp += term;
  }
  for (double beta : {theta.beta_diag, theta.beta_off}) {
    const double term = log_uniform_box(beta, spec.beta_upper);
    if (!std::isfinite(term)) return kNegInf;
    lp += term;
  }
  if (spec.fix_kstar_zero) return lp;

  const std::size_t d = theta.k_star.size() * theta.k_star.size();
  for (std::size_t idx = 0; idx < d; ++idx) {
    const double x = theta.k_star.data()[idx];
    if (spec.kstar_prior == KstarPrior::kNormal) {
      lp += -0.5 * kLogTwoPi - 0.5 * x * x;
    } else {
      const double xi = theta.xi.data()[idx];
      if (!(xi > 0.0)) return kNegInf;
      lp += -0.5 * kLogTwoPi - std::log(xi) - 0.5 * (x / xi) * (x / xi);
      lp += std::log(2.0 / 3.14159265358979323846) - std::log1p(xi * xi);
    }
  }

  const auto k = induced_k(theta.k_star);
  if (!k || !check_c3(*k)) return kNegInf;
  return lp;
}

double log_posterior(const PosteriorSample& theta, const EventData& data,
                     const PriorSpec& spec) {
  const double lp = log_prior(theta, spec);
  if (!std::isfinite(lp)) return kNegInf;
  const Matrix k = spec.fix_kstar_zero ? Matrix(theta.mu.size())
                                       : kstar_to_k(theta.k_star);
  const ModelParams params = params_from(theta, k);
  const double compensator = compensator_simpson(params, data);
  const LogLikelihood lik = log_likelihood(params, data, compensator);
  if (lik.zero_intensity) return kNegInf;
  return lp + lik.value;
}

std::vector<std::vector<PosteriorSample>> run_mcmc(const EventData& data,
                                                   const PriorSpec& spec,
                                                   const McmcConfig& cfg) {
  data.validate();
  if (data.total_count() == 0) throw std::invalid_argument("event data is empty");
  if (cfg.n_chains == 0 || cfg.n_draws == 0) {
    throw std::invalid_argument("need at least one chain and one draw");
  }

  std::vector<std::vector<PosteriorSample>> chains(cfg.n_chains);
  std::vector<std::exception_ptr> errors(cfg.n_chains);
  const RngStream root(cfg.seed);

  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers =
      std::min<std::size_t>(cfg.n_chains, cfg.n_threads == 0 ? hw : cfg.n_threads);

  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t c = w; c < cfg.n_chains; c += workers) {
        try {
          ChainWorker worker(data, spec, cfg);
          chains[c] = worker.run(root.child(c).next_u64());
        } catch (...) {
          errors[c] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return chains;
}

std::vector<std::string> parameter_names(std::size_t dims, bool include_xi) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dims; ++i) names.push_back("mu_" + std::to_string(i + 1));
  // Column-major over K*, matching the usual reporting order.
  for (std::size_t j = 0; j < dims; ++j) {
    for (std::size_t i = 0; i < dims; ++i) {
      names.push_back("kstar_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
    }
  }
  names.push_back("beta_diag");
  names.push_back("beta_off");
  if (include_xi) {
    for (std::size_t j = 0; j < dims; ++j) {
      for (std::size_t i = 0; i < dims; ++i) {
        names.push_back("xi_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
      }
    }
  }
  return names;
}

std::vector<double> flatten_sample(const PosteriorSample& theta, bool include_xi) {
  const std::size_t m = theta.mu.size();
  std::vector<double> out;
  out.insert(out.end(), theta.mu.begin(), theta.mu.end());
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) out.push_back(theta.k_star(i, j));
  out.push_back(theta.beta_diag);
  out.push_back(theta.beta_off);
  if (include_xi) {
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < m; ++i) out.push_back(theta.xi(i, j));
  }
  return out;
}

}  // namespace hawkes
