#include "hawkes/integration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hawkes {

namespace {

void require_equal_betas(const ModelParams& params) {
  if (params.beta_diag != params.beta_off) {
    throw std::invalid_argument("this operation requires beta_diag == beta_off");
  }
}

// Exponentially decayed history sums, advanced segment by segment. For each
// source dimension j the two sums hold
//   sum over events t_jl <= pos of exp(-beta * (pos - t_jl))
// at the two decay rates. Events exactly at pos enter with weight one, so
// node evaluations at a segment start see the right limit of the intensity.
struct HistoryWalker {
  const ModelParams& params;
  const EventData& data;
  std::vector<std::size_t> next_event;
  std::vector<double> s_diag;
  std::vector<double> s_off;

  explicit HistoryWalker(const ModelParams& p, const EventData& d)
      : params(p),
        data(d),
        next_event(d.dims(), 0),
        s_diag(d.dims(), 0.0),
        s_off(d.dims(), 0.0) {}

  // Raw activation of dimension i at offset delta past the current
  // position, given the per-rate decay factors exp(-beta * delta).
  double raw_at(std::size_t i, double factor_diag, double factor_off) const {
    const std::size_t m = data.dims();
    double cross = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) cross += params.k(j, i) * s_off[j];
    }
    return params.mu[i] +
           params.beta_diag * params.k(i, i) * s_diag[i] * factor_diag +
           params.beta_off * cross * factor_off;
  }

  void decay(double factor_diag, double factor_off) {
    for (std::size_t j = 0; j < data.dims(); ++j) {
      s_diag[j] *= factor_diag;
      s_off[j] *= factor_off;
    }
  }

  // Absorbs every event at exactly time t into the sums; the caller must
  // already have decayed the sums to t.
  void absorb_events_at(double t) {
    for (std::size_t j = 0; j < data.dims(); ++j) {
      while (next_event[j] < data.times[j].size() &&
             data.times[j][next_event[j]] == t) {
        s_diag[j] += 1.0;
        s_off[j] += 1.0;
        ++next_event[j];
      }
    }
  }

  bool has_event_at(std::size_t j, double t) const {
    return next_event[j] < data.times[j].size() && data.times[j][next_event[j]] == t;
  }
};

}  // namespace

SegmentGrid SegmentGrid::from_events(const EventData& data) {
  SegmentGrid grid;
  auto& b = grid.breakpoints;
  b.reserve(data.total_count() + 2);
  b.push_back(0.0);
  for (const auto& row : data.times) b.insert(b.end(), row.begin(), row.end());
  b.push_back(data.t_max);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return grid;
}

LikelihoodTerms likelihood_terms(const ModelParams& params, const EventData& data,
                                 const SegmentGrid& grid) {
  LikelihoodTerms out;
  HistoryWalker walker(params, data);

  // Events at t = 0 see an empty history, so their intensity is mu.
  for (std::size_t j = 0; j < data.dims(); ++j) {
    if (walker.has_event_at(j, 0.0)) out.sum_log_intensity += std::log(params.mu[j]);
  }
  walker.absorb_events_at(0.0);

  const std::size_t m = data.dims();
  for (std::size_t seg = 0; seg + 1 < grid.breakpoints.size(); ++seg) {
    const double a = grid.breakpoints[seg];
    const double b = grid.breakpoints[seg + 1];
    const double h = b - a;

    const double fd1 = std::exp(-params.beta_diag * h / 3.0);
    const double fo1 = std::exp(-params.beta_off * h / 3.0);
    const double fd[4] = {1.0, fd1, fd1 * fd1, fd1 * fd1 * fd1};
    const double fo[4] = {1.0, fo1, fo1 * fo1, fo1 * fo1 * fo1};

    double node_total[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < m; ++i) {
      for (int n = 0; n < 4; ++n) {
        node_total[n] += std::max(0.0, walker.raw_at(i, fd[n], fo[n]));
      }
    }
    out.compensator +=
        h / 8.0 * (node_total[0] + 3.0 * node_total[1] + 3.0 * node_total[2] + node_total[3]);

    // The intensity of an event at b is its left limit: the history up to
    // the segment start decayed over the whole segment, excluding the
    // event itself and any tie at b.
    for (std::size_t j = 0; j < m; ++j) {
      if (!walker.has_event_at(j, b)) continue;
      const double lam = std::max(0.0, walker.raw_at(j, fd[3], fo[3]));
      if (lam <= 0.0) {
        out.zero_intensity = true;
      } else {
        out.sum_log_intensity += std::log(lam);
      }
    }
    walker.decay(fd[3], fo[3]);
    walker.absorb_events_at(b);
  }
  return out;
}

double compensator_simpson(const ModelParams& params, const EventData& data,
                           const SegmentGrid& grid) {
  return likelihood_terms(params, data, grid).compensator;
}

double compensator_simpson(const ModelParams& params, const EventData& data) {
  return compensator_simpson(params, data, SegmentGrid::from_events(data));
}

std::optional<RootCrossing> roots_equal_beta(const ModelParams& params,
                                             const EventData& data,
                                             std::size_t dim, double seg_a,
                                             double seg_b) {
  require_equal_betas(params);
  if (dim >= data.dims()) throw std::out_of_range("dimension index out of range");
  if (!(seg_a >= 0.0) || !(seg_b > seg_a)) {
    throw std::invalid_argument("segment must satisfy 0 <= a < b");
  }
  const double beta = params.beta_diag;

  // Pooled exponential weight at seg_a, events up to and including seg_a.
  double w = 0.0;
  for (std::size_t j = 0; j < data.dims(); ++j) {
    const double coef = params.k(j, dim) * beta;
    if (coef == 0.0) continue;
    for (double s : data.times[j]) {
      if (s > seg_a) break;
      w += coef * std::exp(-beta * (seg_a - s));
    }
  }

  const double mu = params.mu[dim];
  if (w >= 0.0 || mu + w >= 0.0) return std::nullopt;
  const double t = seg_a + std::log(-w / mu) / beta;
  if (t >= seg_b) return std::nullopt;
  // mu > 0 forces the pooled exponential upward through zero, so any
  // crossing exits the clamp.
  return RootCrossing{t, CrossingDirection::kUp};
}

double compensator_exact_equal_beta(const ModelParams& params, const EventData& data) {
  require_equal_betas(params);
  const double beta = params.beta_diag;
  const SegmentGrid grid = SegmentGrid::from_events(data);

  HistoryWalker walker(params, data);
  walker.absorb_events_at(0.0);

  const std::size_t m = data.dims();
  double total = 0.0;
  for (std::size_t seg = 0; seg + 1 < grid.breakpoints.size(); ++seg) {
    const double h = grid.breakpoints[seg + 1] - grid.breakpoints[seg];
    const double decay_h = std::exp(-beta * h);

    for (std::size_t i = 0; i < m; ++i) {
      double w = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        w += params.k(j, i) * (j == i ? walker.s_diag[j] : walker.s_off[j]);
      }
      w *= beta;
      const double mu = params.mu[i];
      if (w >= 0.0 || mu + w >= 0.0) {
        // Activation non-negative on the whole segment.
        total += mu * h + w / beta * (1.0 - decay_h);
      } else {
        const double t_cross = std::log(-w / mu) / beta;  // offset from segment start
        if (t_cross < h) {
          // exp(-beta * t_cross) = -mu / w exactly, by construction.
          total += mu * (h - t_cross) + (-mu - w * decay_h) / beta;
        }
        // Fully clamped segment contributes nothing.
      }
    }
    walker.decay(decay_h, decay_h);
    walker.absorb_events_at(grid.breakpoints[seg + 1]);
  }
  return total;
}

}  // namespace hawkes
