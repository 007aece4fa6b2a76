#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hawkes/event_data.hpp"
#include "hawkes/inference.hpp"
#include "hawkes/matrix.hpp"
#include "hawkes/model_params.hpp"
#include "hawkes/simulation.hpp"

namespace hawkes {

/// Structured run configuration (JSON, "version": 1). The model section
/// carries exactly one of k / kstar; parameters are canonicalized to K*.
struct RunConfig {
  struct Model {
    std::size_t dims = 0;
    std::vector<double> mu;
    Matrix k_star;  // canonical form
    double beta_diag = 1.0;
    double beta_off = 1.0;

    ModelParams params() const;
  };
  struct Sim {
    double t_max = 0.0;
    std::uint64_t seed = 1;
    std::size_t replicates = 1;
    std::size_t max_events = 1'000'000;
  };
  struct Fit {
    KstarPrior prior = KstarPrior::kNormal;
    std::size_t chains = 4;
    std::size_t warmup = 1500;
    std::size_t draws = 188;
    std::size_t thin = 10;
    std::uint64_t seed = 1;
  };
  struct Io {
    std::string events = "events.csv";
    std::optional<std::string> branching;
    std::string draws = "draws.csv";
    std::string histogram = "histogram.csv";
  };

  Model model;
  Sim sim;
  Fit fit;
  Io io;
};

RunConfig load_run_config(const std::string& path);

/// Event CSV: header `dimension,time`, dimensions 1-based, times written
/// with 17 significant digits so a read reproduces the data exactly.
void write_events_csv(const std::string& path, const EventData& data);
EventData read_events_csv(const std::string& path, std::size_t dims, double t_max);

/// Branching CSV: `event_id,dimension,time,parent_id`, ids 1-based,
/// parent_id 0 for immigrants.
void write_branching_csv(const std::string& path, const BranchingRecord& record);

/// Draws CSV: `chain,draw,<parameters...>,lp`, one row per retained draw.
void write_draws_csv(const std::string& path,
                     const std::vector<std::vector<PosteriorSample>>& chains,
                     bool include_xi);

struct DrawsTable {
  std::vector<std::string> names;                        // parameter columns
  std::vector<std::vector<std::vector<double>>> chains;  // [chain][draw][param]
};

DrawsTable read_draws_csv(const std::string& path);

/// Matrix CSV for the stability command: one row per line, comma-separated.
Matrix read_matrix_csv(const std::string& path);

/// Histogram CSV (`parameter,bin_lo,bin_hi,count`) with Freedman-Diaconis
/// bin widths per parameter.
void write_histogram_csv(const std::string& path,
                         const std::vector<std::string>& names,
                         const std::vector<std::vector<double>>& pooled_draws);

}  // namespace hawkes
