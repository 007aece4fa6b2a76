#include "hawkes/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hawkes/rng.hpp"
#include "hawkes/stability.hpp"

namespace hawkes {

namespace {

// Stream labels for the independent random sources of one run.
constexpr std::uint64_t kImmigrantArrivals = 1;
constexpr std::uint64_t kImmigrantCascades = 2;
constexpr std::uint64_t kThinClassic = 3;
constexpr std::uint64_t kThinBranching = 4;

struct RawEvent {
  double time;
  std::size_t dim;
  std::size_t parent;  // index into the raw vector, or kImmigrant
  RngStream stream;    // cascade stream used to spawn this event's children
};

// Signed-K intensity of `dim` at time t from a masked event list, strictly
// earlier events only. `use_positive_part` switches to the K+ kernel.
double masked_intensity(const ModelParams& params, const BranchingRecord& rec,
                        const std::vector<char>& retained, bool use_positive_part,
                        std::size_t dim, double t) {
  double raw = params.mu[dim];
  for (std::size_t e = 0; e < rec.size(); ++e) {
    if (rec.times[e] >= t) break;
    if (!retained[e]) continue;
    const std::size_t j = rec.dims[e];
    double coef = params.k(j, dim);
    if (use_positive_part) coef = std::max(coef, 0.0);
    if (coef == 0.0) continue;
    const double b = params.beta(j, dim);
    raw += coef * b * std::exp(-b * (t - rec.times[e]));
  }
  return std::max(0.0, raw);
}

SimResult build_result(const SimConfig& cfg, std::vector<RawEvent> raw) {
  // Global order: time, then dimension, then creation order.
  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&raw](std::size_t a, std::size_t b) {
    if (raw[a].time != raw[b].time) return raw[a].time < raw[b].time;
    if (raw[a].dim != raw[b].dim) return raw[a].dim < raw[b].dim;
    return a < b;
  });
  std::vector<std::size_t> rank(raw.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

  SimResult out;
  out.record.times.reserve(raw.size());
  out.record.dims.reserve(raw.size());
  out.record.parent.reserve(raw.size());
  out.events.t_max = cfg.t_max;
  out.events.times.assign(cfg.params.dims(), {});

  for (std::size_t i = 0; i < order.size(); ++i) {
    const RawEvent& ev = raw[order[i]];
    out.record.times.push_back(ev.time);
    out.record.dims.push_back(ev.dim);
    if (ev.parent == BranchingRecord::kImmigrant) {
      out.record.parent.push_back(BranchingRecord::kImmigrant);
    } else {
      const std::size_t p = rank[ev.parent];
      if (p >= i) {
        throw std::logic_error("branching order degenerate: parent does not precede child");
      }
      out.record.parent.push_back(p);
    }
    out.events.times[ev.dim].push_back(ev.time);
  }
  return out;
}

SimResult filter_retained(const SimConfig& cfg, const SimResult& proposal,
                          const std::vector<char>& retained) {
  const BranchingRecord& rec = proposal.record;
  std::vector<std::size_t> new_index(rec.size(), BranchingRecord::kImmigrant);
  SimResult out;
  out.events.t_max = cfg.t_max;
  out.events.times.assign(cfg.params.dims(), {});
  for (std::size_t i = 0; i < rec.size(); ++i) {
    if (!retained[i]) continue;
    new_index[i] = out.record.times.size();
    out.record.times.push_back(rec.times[i]);
    out.record.dims.push_back(rec.dims[i]);
    if (rec.parent[i] == BranchingRecord::kImmigrant) {
      out.record.parent.push_back(BranchingRecord::kImmigrant);
    } else {
      if (!retained[rec.parent[i]]) {
        throw std::logic_error("thinning removed a parent but kept its child");
      }
      out.record.parent.push_back(new_index[rec.parent[i]]);
    }
    out.events.times[rec.dims[i]].push_back(rec.times[i]);
  }
  return out;
}

}  // namespace

void SimConfig::validate() const {
  params.validate();
  if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be non-negative");
  if (max_events == 0) throw std::invalid_argument("max_events must be positive");
}

std::vector<std::vector<std::size_t>> BranchingRecord::children() const {
  std::vector<std::vector<std::size_t>> out(size());
  for (std::size_t i = 0; i < size(); ++i) {
    if (parent[i] != kImmigrant) out[parent[i]].push_back(i);
  }
  return out;
}

std::vector<std::size_t> BranchingRecord::offspring_closure(std::size_t i) const {
  const auto kids = children();
  std::vector<std::size_t> closure;
  std::vector<std::size_t> stack = kids[i];
  while (!stack.empty()) {
    const std::size_t e = stack.back();
    stack.pop_back();
    closure.push_back(e);
    stack.insert(stack.end(), kids[e].begin(), kids[e].end());
  }
  std::sort(closure.begin(), closure.end());
  return closure;
}

std::size_t BranchingRecord::generation(std::size_t i) const {
  std::size_t g = 0;
  while (parent[i] != kImmigrant) {
    i = parent[i];
    ++g;
  }
  return g;
}

SimResult simulate_branching_positive(const SimConfig& cfg) {
  cfg.validate();
  const std::size_t m = cfg.params.dims();
  const Matrix k_plus = positive_part(cfg.params.k);
  const RngStream root(cfg.seed);

  std::vector<RawEvent> raw;

  // Immigrants: exponential inter-arrivals per dimension. Each immigrant
  // owns a cascade stream so replicate-level parallelism cannot reorder
  // offspring draws.
  for (std::size_t i = 0; i < m; ++i) {
    RngStream arrivals = root.child(kImmigrantArrivals).child(i);
    const RngStream cascades = root.child(kImmigrantCascades).child(i);
    double t = 0.0;
    for (std::size_t n = 0;; ++n) {
      t += arrivals.exponential(cfg.params.mu[i]);
      if (t > cfg.t_max) break;
      raw.push_back({t, i, BranchingRecord::kImmigrant, cascades.child(n)});
      if (raw.size() > cfg.max_events) throw ExplosionError(raw.size());
    }
  }

  // Breadth-first cascade expansion.
  for (std::size_t head = 0; head < raw.size(); ++head) {
    const double parent_time = raw[head].time;
    const std::size_t parent_dim = raw[head].dim;
    const RngStream parent_stream = raw[head].stream;
    for (std::size_t j = 0; j < m; ++j) {
      const double mean = k_plus(parent_dim, j);
      if (mean == 0.0) continue;
      RngStream os = parent_stream.child(j);
      const std::size_t n = os.poisson(mean);
      for (std::size_t l = 0; l < n; ++l) {
        const double t = parent_time + os.exponential(cfg.params.beta(parent_dim, j));
        if (t > cfg.t_max) continue;
        raw.push_back({t, j, head, os.child(l + 1)});
        if (raw.size() > cfg.max_events) throw ExplosionError(raw.size());
      }
    }
  }

  return build_result(cfg, std::move(raw));
}

EventData thin_classic(const SimConfig& cfg, const SimResult& proposal) {
  cfg.validate();
  const BranchingRecord& rec = proposal.record;
  RngStream stream = RngStream(cfg.seed).child(kThinClassic);

  const std::vector<char> all(rec.size(), 1);
  std::vector<char> retained(rec.size(), 1);
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const double u = stream.uniform();
    const double a =
        masked_intensity(cfg.params, rec, retained, false, rec.dims[i], rec.times[i]);
    const double b_original =
        masked_intensity(cfg.params, rec, all, true, rec.dims[i], rec.times[i]);
    if (!(b_original > 0.0)) {
      throw std::logic_error("dominating intensity vanished at a proposal event");
    }
    if (u > a / b_original) retained[i] = 0;
  }

  return filter_retained(cfg, proposal, retained).events;
}

SimResult thin_branching(const SimConfig& cfg, const SimResult& proposal) {
  cfg.validate();
  const BranchingRecord& rec = proposal.record;
  RngStream stream = RngStream(cfg.seed).child(kThinBranching);
  const auto kids = rec.children();

  std::vector<char> retained(rec.size(), 1);
  for (std::size_t i = 0; i < rec.size(); ++i) {
    if (!retained[i]) continue;  // removed with an earlier cascade, no draw
    const double u = stream.uniform();
    const double a =
        masked_intensity(cfg.params, rec, retained, false, rec.dims[i], rec.times[i]);
    const double b =
        masked_intensity(cfg.params, rec, retained, true, rec.dims[i], rec.times[i]);
    if (!(b > 0.0)) {
      throw std::logic_error("dominating intensity vanished at a proposal event");
    }
    if (u > a / b) {
      // Remove the event and its whole offspring closure.
      std::vector<std::size_t> stack{i};
      while (!stack.empty()) {
        const std::size_t e = stack.back();
        stack.pop_back();
        retained[e] = 0;
        stack.insert(stack.end(), kids[e].begin(), kids[e].end());
      }
    }
  }

  return filter_retained(cfg, proposal, retained);
}

SimResult simulate(const SimConfig& cfg) {
  return thin_branching(cfg, simulate_branching_positive(cfg));
}

}  // namespace hawkes
