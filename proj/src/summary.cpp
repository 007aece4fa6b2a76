#include "hawkes/summary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hawkes {

namespace {

double mean_of(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sd_of(const std::vector<double>& x, double mean) {
  if (x.size() < 2) return 0.0;
  double s = 0.0;
  for (double v : x) s += (v - mean) * (v - mean);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

// Linear-interpolation quantile on a sorted copy.
double quantile(std::vector<double> x, double q) {
  std::sort(x.begin(), x.end());
  const double pos = q * static_cast<double>(x.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return x[lo] * (1.0 - frac) + x[hi] * frac;
}

// Acklam's inverse normal CDF; relative error below 1.2e-9, ample for the
// rank transform.
double inverse_normal_cdf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("p must be in (0,1)");
  double q, r;
  if (p < p_low) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
}

// ESS of one chain: n / (1 + 2 sum of autocorrelations), truncated at the
// first pair (rho_{2t} + rho_{2t+1}) that turns negative.
double chain_ess(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 2) return static_cast<double>(n);
  const double mean = mean_of(x);
  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = x[i] - mean;
  double c0 = 0.0;
  for (double v : centered) c0 += v * v;
  c0 /= static_cast<double>(n);
  if (c0 <= 0.0) return static_cast<double>(n);  // constant chain

  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += centered[i] * centered[i + lag];
    return s / static_cast<double>(n);
  };

  double tau = 1.0;
  for (std::size_t t = 1; t + 1 < n; t += 2) {
    const double pair = (autocov(t) + autocov(t + 1)) / c0;
    if (pair < 0.0) break;
    tau += 2.0 * pair;
  }
  return std::clamp(static_cast<double>(n) / tau, 1.0, static_cast<double>(n));
}

// Classic split-Rhat on already-transformed sequences.
double split_rhat(const std::vector<std::vector<double>>& sequences, bool& defined) {
  const std::size_t s = sequences.size();
  const std::size_t n = sequences.front().size();
  std::vector<double> seq_means(s), seq_vars(s);
  for (std::size_t i = 0; i < s; ++i) {
    seq_means[i] = mean_of(sequences[i]);
    seq_vars[i] = 0.0;
    for (double v : sequences[i]) seq_vars[i] += (v - seq_means[i]) * (v - seq_means[i]);
    seq_vars[i] /= static_cast<double>(n - 1);
  }
  const double w = mean_of(seq_vars);
  const double grand = mean_of(seq_means);
  double b = 0.0;
  for (double mji : seq_means) b += (mji - grand) * (mji - grand);
  b *= static_cast<double>(n) / static_cast<double>(s - 1);
  if (!(w > 0.0)) {
    defined = false;
    return 0.0;
  }
  defined = true;
  const double var_plus =
      (static_cast<double>(n - 1) / static_cast<double>(n)) * w + b / static_cast<double>(n);
  return std::sqrt(var_plus / w);
}

}  // namespace

ChainSummary summarize(const std::vector<std::string>& names,
                       const std::vector<std::vector<std::vector<double>>>& chains) {
  if (chains.empty()) throw std::invalid_argument("need at least one chain");
  const std::size_t n = chains.front().size();
  std::size_t total = 0;
  for (const auto& c : chains) {
    if (c.size() != n) throw std::invalid_argument("chains must have equal length");
    total += c.size();
  }
  if (total < 2) throw std::invalid_argument("need at least two draws");
  const std::size_t p = names.size();
  for (const auto& c : chains)
    for (const auto& row : c)
      if (row.size() != p) throw std::invalid_argument("draw width does not match names");

  ChainSummary out;
  out.n_chains = chains.size();
  out.n_draws_per_chain = n;
  out.parameters.reserve(p);

  for (std::size_t param = 0; param < p; ++param) {
    std::vector<double> pooled;
    pooled.reserve(total);
    std::vector<std::vector<double>> per_chain(chains.size());
    for (std::size_t c = 0; c < chains.size(); ++c) {
      per_chain[c].reserve(n);
      for (const auto& row : chains[c]) {
        per_chain[c].push_back(row[param]);
        pooled.push_back(row[param]);
      }
    }

    ParameterSummary s;
    s.name = names[param];
    s.mean = mean_of(pooled);
    s.sd = sd_of(pooled, s.mean);
    s.q025 = quantile(pooled, 0.025);
    s.q975 = quantile(pooled, 0.975);

    double ess = 0.0;
    for (const auto& c : per_chain) ess += chain_ess(c);
    s.ess = std::min(ess, static_cast<double>(total));

    // Rank-normalized split-Rhat: halve every chain, rank the pooled draws
    // (average ties), map ranks through the normal quantile function.
    std::vector<std::vector<double>> halves;
    for (const auto& c : per_chain) {
      const std::size_t half = c.size() / 2;
      if (half >= 2) {
        halves.emplace_back(c.begin(), c.begin() + half);
        halves.emplace_back(c.begin() + half, c.begin() + 2 * half);
      }
    }
    if (halves.size() < 2) {
      s.rhat_defined = false;
    } else {
      std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> tagged;
      for (std::size_t i = 0; i < halves.size(); ++i)
        for (std::size_t j = 0; j < halves[i].size(); ++j)
          tagged.push_back({halves[i][j], {i, j}});
      std::sort(tagged.begin(), tagged.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      const double count = static_cast<double>(tagged.size());
      std::size_t idx = 0;
      while (idx < tagged.size()) {
        std::size_t run_end = idx;
        while (run_end + 1 < tagged.size() &&
               tagged[run_end + 1].first == tagged[idx].first) {
          ++run_end;
        }
        const double avg_rank =
            (static_cast<double>(idx) + static_cast<double>(run_end)) / 2.0 + 1.0;
        const double z = inverse_normal_cdf((avg_rank - 0.375) / (count + 0.25));
        for (std::size_t r = idx; r <= run_end; ++r) {
          halves[tagged[r].second.first][tagged[r].second.second] = z;
        }
        idx = run_end + 1;
      }
      s.rhat = split_rhat(halves, s.rhat_defined);
    }

    out.parameters.push_back(std::move(s));
  }
  return out;
}

ChainSummary summarize(const std::vector<std::vector<PosteriorSample>>& chains,
                       bool include_xi) {
  if (chains.empty() || chains.front().empty()) {
    throw std::invalid_argument("need at least one chain with draws");
  }
  const std::size_t dims = chains.front().front().mu.size();
  std::vector<std::vector<std::vector<double>>> cube;
  cube.reserve(chains.size());
  for (const auto& chain : chains) {
    std::vector<std::vector<double>> rows;
    rows.reserve(chain.size());
    for (const auto& draw : chain) rows.push_back(flatten_sample(draw, include_xi));
    cube.push_back(std::move(rows));
  }
  return summarize(parameter_names(dims, include_xi), cube);
}

}  // namespace hawkes
