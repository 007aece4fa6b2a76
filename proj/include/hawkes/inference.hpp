#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hawkes/event_data.hpp"
#include "hawkes/matrix.hpp"

namespace hawkes {

enum class KstarPrior { kNormal, kHorseshoe };

/// Prior specification: uniform boxes on mu and the betas, a Normal(0,1) or
/// horseshoe prior on each K* entry, and a hard stability truncation (the
/// induced K must satisfy C3). The truncation normalizing constant is
/// omitted; it does not depend on the parameters.
struct PriorSpec {
  double mu_upper = 10.0;
  double beta_upper = 3.0;
  KstarPrior kstar_prior = KstarPrior::kNormal;
  /// Degenerate mode pinning K* = 0 (pure Poisson); K* blocks are not
  /// sampled.
  bool fix_kstar_zero = false;
};

/// One posterior draw. xi carries the horseshoe local scales and stays at 1
/// under the Normal prior.
struct PosteriorSample {
  std::vector<double> mu;
  Matrix k_star;
  double beta_diag = 1.0;
  double beta_off = 1.0;
  Matrix xi;
  double log_posterior = 0.0;
};

/// Log prior density (up to the constant stability truncation). Returns
/// -infinity outside the box constraints, for non-positive horseshoe
/// scales, or when the induced K is not C3-stable.
double log_prior(const PosteriorSample& theta, const PriorSpec& spec);

/// log_prior + log_likelihood with the Simpson compensator; -infinity
/// short-circuits without evaluating the likelihood.
double log_posterior(const PosteriorSample& theta, const EventData& data,
                     const PriorSpec& spec);

struct McmcConfig {
  std::size_t n_chains = 4;
  std::size_t n_warmup = 1500;
  std::size_t n_draws = 188;  // retained per chain
  std::size_t thin = 10;      // post-warmup sweeps per retained draw
  std::uint64_t seed = 1;
  std::size_t n_threads = 0;  // 0 = hardware concurrency
};

/// Raised when a sampler degenerates (essentially all proposals rejected
/// during warmup).
class McmcDiagnosticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive random-walk Metropolis over (mu, K*, beta_diag, beta_off) plus
/// the horseshoe scales when selected. Scalar blocks adapt independent
/// step sizes; the K* block adapts a joint proposal covariance from the
/// warmup history, scaled toward 0.234 acceptance. Adaptation stops after
/// warmup. Chains are independent and deterministic in the seed.
std::vector<std::vector<PosteriorSample>> run_mcmc(const EventData& data,
                                                   const PriorSpec& spec,
                                                   const McmcConfig& cfg);

/// Column names of the flattened parameter vector, in reporting order:
/// mu_1..mu_M, K* column-major, beta_diag, beta_off, then xi (horseshoe
/// runs only).
std::vector<std::string> parameter_names(std::size_t dims, bool include_xi);

/// Flattens a sample in the parameter_names order.
std::vector<double> flatten_sample(const PosteriorSample& theta, bool include_xi);

}  // namespace hawkes
