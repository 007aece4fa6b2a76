#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hawkes/inference.hpp"

namespace hawkes {

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q975 = 0.0;
  double ess = 0.0;
  double rhat = 0.0;
  bool rhat_defined = true;  // false for constant chains
};

struct ChainSummary {
  std::vector<ParameterSummary> parameters;
  std::size_t n_chains = 0;
  std::size_t n_draws_per_chain = 0;
};

/// Per-parameter posterior mean, sd, central 95% interval, effective sample
/// size (Geyer truncation at the first negative autocorrelation pair,
/// summed over chains, capped at the draw count) and rank-normalized
/// split-Rhat. chains is indexed [chain][draw][parameter]; every chain must
/// hold the same number of draws and at least 2 in total.
ChainSummary summarize(const std::vector<std::string>& names,
                       const std::vector<std::vector<std::vector<double>>>& chains);

/// Convenience overload flattening posterior draws in parameter_names order.
ChainSummary summarize(const std::vector<std::vector<PosteriorSample>>& chains,
                       bool include_xi);

}  // namespace hawkes
