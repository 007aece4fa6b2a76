#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hawkes/event_data.hpp"
#include "hawkes/model_params.hpp"

namespace hawkes {

struct SimConfig {
  ModelParams params;
  double t_max = 0.0;
  std::uint64_t seed = 0;
  std::size_t max_events = 1'000'000;

  void validate() const;
};

/// Immigrant/offspring genealogy of a realization, stored in global time
/// order (ties broken by dimension, then creation order). parent[i] is the
/// index of the direct parent, or kImmigrant for background events; parent
/// pointers always point strictly backward.
struct BranchingRecord {
  static constexpr std::size_t kImmigrant = std::numeric_limits<std::size_t>::max();

  std::vector<double> times;
  std::vector<std::size_t> dims;
  std::vector<std::size_t> parent;

  std::size_t size() const noexcept { return times.size(); }

  /// Direct children of each event.
  std::vector<std::vector<std::size_t>> children() const;

  /// All direct and indirect offsprings of event i.
  std::vector<std::size_t> offspring_closure(std::size_t i) const;

  /// Depth in the genealogy; immigrants are generation 0.
  std::size_t generation(std::size_t i) const;
};

struct SimResult {
  EventData events;
  BranchingRecord record;
};

/// Raised when a run exceeds max_events; carries the partial count. Under
/// C3 this signals either unstable parameters or a cap set too low.
class ExplosionError : public std::runtime_error {
 public:
  explicit ExplosionError(std::size_t count)
      : std::runtime_error("simulation exceeded max_events"), partial_count(count) {}
  std::size_t partial_count;
};

/// Cluster sampler for the excitation-only process under K+, the entrywise
/// positive part of cfg.params.k: immigrants arrive as homogeneous Poisson
/// streams, every event spawns Poisson(K+_ij) children per target dimension
/// at exponential offsets, and children beyond t_max are discarded.
SimResult simulate_branching_positive(const SimConfig& cfg);

/// Classic thinning (no branching structure): each proposal event is kept
/// with probability a / b_original, where a is the signed-K intensity given
/// the retained history and b_original the K+ intensity given the full
/// original proposal.
EventData thin_classic(const SimConfig& cfg, const SimResult& proposal);

/// Branching-preserving thinning: the acceptance ratio uses the retained
/// history for both intensities, and a rejected event is removed together
/// with its entire offspring closure, so every retained event's parent is
/// retained.
SimResult thin_branching(const SimConfig& cfg, const SimResult& proposal);

/// Draws from the signed-K target: branching proposal under K+, then
/// branching-preserving thinning.
SimResult simulate(const SimConfig& cfg);

}  // namespace hawkes
