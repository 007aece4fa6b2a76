#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hawkes/inference.hpp"
#include "hawkes/io.hpp"
#include "hawkes/reparam.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulation.hpp"
#include "hawkes/stability.hpp"
#include "hawkes/summary.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitUnstable = 2;
constexpr int kExitSamplerFailure = 3;

struct GlobalOpts {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
};

std::size_t resolve_threads(const GlobalOpts& opts) {
  if (opts.threads) return *opts.threads;
  if (const char* env = std::getenv("HAWKES_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 0;  // library default: hardware concurrency
}

void print_stability(const hawkes::StabilityReport& r) {
  const auto yn = [](bool b) { return b ? "yes" : "no"; };
  std::printf("C1 (rho(abs K) < 1):        %s\n", yn(r.c1));
  std::printf("C2 (max colsum K+ < 1):     %s\n", yn(r.c2));
  std::printf("C3 (rho(K+) < 1):           %s\n", yn(r.c3));
  std::printf("rho(abs K)      = %.10f\n", r.rho_abs);
  std::printf("rho(K+)         = %.10f\n", r.rho_plus);
  std::printf("max colsum K+   = %.10f\n", r.max_colsum_plus);
}

std::string replicate_path(const std::string& base, std::size_t r, std::size_t total) {
  if (total <= 1) return base;
  const auto dot = base.rfind('.');
  const std::string stem = dot == std::string::npos ? base : base.substr(0, dot);
  const std::string ext = dot == std::string::npos ? "" : base.substr(dot);
  char suffix[16];
  std::snprintf(suffix, sizeof(suffix), "_r%03zu", r + 1);
  return stem + suffix + ext;
}

int cmd_stability(const std::string& path) {
  hawkes::Matrix k;
  std::ifstream probe(path);
  if (!probe) {
    std::fprintf(stderr, "error: cannot open %s\n", path.c_str());
    return kExitInputError;
  }
  char first = 0;
  probe >> first;
  probe.close();
  if (first == '{') {
    const auto cfg = hawkes::load_run_config(path);
    k = hawkes::kstar_to_k(cfg.model.k_star);
  } else {
    k = hawkes::read_matrix_csv(path);
  }
  const auto report = hawkes::stability_report(k);
  print_stability(report);
  return report.c3 ? kExitOk : kExitUnstable;
}

int cmd_simulate(const std::string& config_path, const GlobalOpts& opts) {
  const auto cfg = hawkes::load_run_config(config_path);
  const hawkes::ModelParams params = cfg.model.params();
  params.validate();

  const auto report = hawkes::stability_report(params.k);
  if (!report.c3) {
    std::fprintf(stderr, "refusing to simulate: parameters fail C3\n");
    print_stability(report);
    return kExitUnstable;
  }

  const std::uint64_t base_seed = opts.seed.value_or(cfg.sim.seed);
  std::printf("simulate: M=%zu t_max=%g seed=%llu replicates=%zu\n", params.dims(),
              cfg.sim.t_max, static_cast<unsigned long long>(base_seed),
              cfg.sim.replicates);
  std::printf("mu =");
  for (double m : params.mu) std::printf(" %g", m);
  std::printf("\nbeta_diag=%g beta_off=%g\n", params.beta_diag, params.beta_off);

  for (std::size_t r = 0; r < cfg.sim.replicates; ++r) {
    hawkes::SimConfig sim_cfg;
    sim_cfg.params = params;
    sim_cfg.t_max = cfg.sim.t_max;
    sim_cfg.max_events = cfg.sim.max_events;
    sim_cfg.seed = cfg.sim.replicates == 1
                       ? base_seed
                       : hawkes::RngStream::mix(base_seed + 0x5EED * (r + 1));
    const auto result = hawkes::simulate(sim_cfg);

    const std::string events_path = replicate_path(cfg.io.events, r, cfg.sim.replicates);
    hawkes::write_events_csv(events_path, result.events);
    if (cfg.io.branching) {
      hawkes::write_branching_csv(replicate_path(*cfg.io.branching, r, cfg.sim.replicates),
                                  result.record);
    }

    std::printf("replicate %zu -> %s: counts", r + 1, events_path.c_str());
    for (std::size_t m = 0; m < result.events.dims(); ++m) {
      std::printf(" %zu", result.events.times[m].size());
    }
    std::printf(" (total %zu)\n", result.events.total_count());
  }
  return kExitOk;
}

void print_summary_table(const hawkes::ChainSummary& summary,
                         const std::map<std::string, double>& truth) {
  const bool have_truth = !truth.empty();
  std::printf("%-12s", "parameter");
  if (have_truth) std::printf(" %8s", "true");
  std::printf(" %14s %9s %9s %8s %7s", "mean (sd)", "2.5%", "97.5%", "ess", "rhat");
  if (have_truth) std::printf(" %8s", "covered");
  std::printf("\n");
  for (const auto& p : summary.parameters) {
    if (p.name == "lp") continue;
    std::printf("%-12s", p.name.c_str());
    const auto t = truth.find(p.name);
    if (have_truth) {
      if (t != truth.end()) {
        std::printf(" %8.2f", t->second);
      } else {
        std::printf(" %8s", "-");
      }
    }
    char mean_sd[32];
    std::snprintf(mean_sd, sizeof(mean_sd), "%.2f (%.2f)", p.mean, p.sd);
    std::printf(" %14s %9.3f %9.3f %8.1f", mean_sd, p.q025, p.q975, p.ess);
    if (p.rhat_defined) {
      std::printf(" %7.3f", p.rhat);
    } else {
      std::printf(" %7s", "-");
    }
    if (have_truth) {
      if (t != truth.end()) {
        const bool covered = p.q025 <= t->second && t->second <= p.q975;
        std::printf(" %8s", covered ? "yes" : "no");
      } else {
        std::printf(" %8s", "-");
      }
    }
    std::printf("\n");
  }
}

std::map<std::string, double> truth_from_model(const hawkes::RunConfig::Model& model) {
  std::map<std::string, double> truth;
  const auto names = hawkes::parameter_names(model.dims, false);
  hawkes::PosteriorSample sample;
  sample.mu = model.mu;
  sample.k_star = model.k_star;
  sample.beta_diag = model.beta_diag;
  sample.beta_off = model.beta_off;
  sample.xi = hawkes::Matrix(model.dims, 1.0);
  const auto values = hawkes::flatten_sample(sample, false);
  for (std::size_t i = 0; i < names.size(); ++i) truth[names[i]] = values[i];
  return truth;
}

int cmd_fit(const std::string& config_path, const std::string& events_path,
            const GlobalOpts& opts) {
  const auto cfg = hawkes::load_run_config(config_path);
  const auto data =
      hawkes::read_events_csv(events_path, cfg.model.dims, cfg.sim.t_max);
  if (data.total_count() == 0) {
    std::fprintf(stderr, "error: %s contains no events\n", events_path.c_str());
    return kExitInputError;
  }

  hawkes::PriorSpec spec;
  spec.kstar_prior = cfg.fit.prior;
  hawkes::McmcConfig mcmc;
  mcmc.n_chains = cfg.fit.chains;
  mcmc.n_warmup = cfg.fit.warmup;
  mcmc.n_draws = cfg.fit.draws;
  mcmc.thin = cfg.fit.thin;
  mcmc.seed = opts.seed.value_or(cfg.fit.seed);
  mcmc.n_threads = resolve_threads(opts);

  const bool include_xi = spec.kstar_prior == hawkes::KstarPrior::kHorseshoe;
  std::printf("fit: prior=%s chains=%zu warmup=%zu draws=%zu thin=%zu seed=%llu\n",
              include_xi ? "horseshoe" : "normal", mcmc.n_chains, mcmc.n_warmup,
              mcmc.n_draws, mcmc.thin, static_cast<unsigned long long>(mcmc.seed));

  const auto chains = hawkes::run_mcmc(data, spec, mcmc);
  hawkes::write_draws_csv(cfg.io.draws, chains, include_xi);
  std::printf("draws written to %s (%zu rows)\n", cfg.io.draws.c_str(),
              mcmc.n_chains * mcmc.n_draws);

  const auto summary = hawkes::summarize(chains, include_xi);
  print_summary_table(summary, truth_from_model(cfg.model));
  return kExitOk;
}

int cmd_summarize(const std::string& draws_path,
                  const std::optional<std::string>& truth_path,
                  const std::optional<std::string>& hist_path) {
  const auto table = hawkes::read_draws_csv(draws_path);
  if (table.chains.empty()) {
    std::fprintf(stderr, "error: draws file has no rows\n");
    return kExitInputError;
  }
  std::size_t total = 0;
  for (const auto& c : table.chains) total += c.size();
  if (total < 2) {
    std::fprintf(stderr, "error: need at least two draws to summarize\n");
    return kExitInputError;
  }

  const auto summary = hawkes::summarize(table.names, table.chains);
  std::map<std::string, double> truth;
  if (truth_path) truth = truth_from_model(hawkes::load_run_config(*truth_path).model);
  print_summary_table(summary, truth);

  std::string hist = hist_path.value_or("");
  if (hist.empty()) {
    const auto dot = draws_path.rfind('.');
    hist = (dot == std::string::npos ? draws_path : draws_path.substr(0, dot)) + "_hist.csv";
  }
  std::vector<std::string> names;
  std::vector<std::vector<double>> pooled;
  for (std::size_t p = 0; p < table.names.size(); ++p) {
    if (table.names[p] == "lp") continue;
    names.push_back(table.names[p]);
    std::vector<double> values;
    for (const auto& chain : table.chains) {
      for (const auto& row : chain) values.push_back(row[p]);
    }
    pooled.push_back(std::move(values));
  }
  hawkes::write_histogram_csv(hist, names, pooled);
  std::printf("histogram bins written to %s\n", hist.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multivariate Hawkes processes with excitation and inhibition"};
  app.require_subcommand(1);

  GlobalOpts opts;
  std::uint64_t seed_value = 0;
  std::size_t threads_value = 0;
  const auto seed_opt = app.add_option("--seed", seed_value, "Override every configured seed");
  const auto threads_opt = app.add_option("--threads", threads_value, "Cap worker threads");

  std::string config_path, events_path, draws_path;
  std::optional<std::string> truth_path, hist_path;
  std::string truth_buf, hist_buf;

  auto* sim = app.add_subcommand("simulate", "Generate event data from a config");
  sim->add_option("config", config_path, "Run configuration (JSON)")->required();

  auto* stab = app.add_subcommand("stability", "Report the C1/C2/C3 stability checks");
  stab->add_option("input", config_path, "Config (JSON) or matrix CSV")->required();

  auto* fit = app.add_subcommand("fit", "Sample the posterior for an event file");
  fit->add_option("config", config_path, "Run configuration (JSON)")->required();
  fit->add_option("events", events_path, "Event CSV")->required();

  auto* summ = app.add_subcommand("summarize", "Summarize a draws CSV");
  summ->add_option("draws", draws_path, "Draws CSV")->required();
  const auto truth_opt = summ->add_option("--truth", truth_buf, "Config with true parameters");
  const auto hist_opt = summ->add_option("--hist", hist_buf, "Histogram CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInputError;
  }

  if (seed_opt->count() > 0) opts.seed = seed_value;
  if (threads_opt->count() > 0) opts.threads = threads_value;
  if (truth_opt->count() > 0) truth_path = truth_buf;
  if (hist_opt->count() > 0) hist_path = hist_buf;

  try {
    if (sim->parsed()) return cmd_simulate(config_path, opts);
    if (stab->parsed()) return cmd_stability(config_path);
    if (fit->parsed()) return cmd_fit(config_path, events_path, opts);
    if (summ->parsed()) return cmd_summarize(draws_path, truth_path, hist_path);
  } catch (const hawkes::McmcDiagnosticsError& e) {
    std::fprintf(stderr, "sampler failure: %s\n", e.what());
    return kExitSamplerFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  }
  return kExitInputError;
}
