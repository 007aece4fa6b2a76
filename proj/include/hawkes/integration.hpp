#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hawkes/event_data.hpp"
#include "hawkes/model_params.hpp"

namespace hawkes {

/// Pooled, deduplicated event times with 0 and t_max as the first and last
/// breakpoints. Segment interiors contain no events.
struct SegmentGrid {
  std::vector<double> breakpoints;

  static SegmentGrid from_events(const EventData& data);
};

/// Compensator via the cubic (3/8) Simpson rule on each inter-event
/// segment: within a segment the history is frozen to events at or before
/// the segment start, the ReLU link is applied at each of the four nodes,
/// and per-dimension contributions are summed. Kinks where the activation
/// crosses zero inside a segment are accepted approximation error.
double compensator_simpson(const ModelParams& params, const EventData& data);
double compensator_simpson(const ModelParams& params, const EventData& data,
                           const SegmentGrid& grid);

/// One pass over the grid yielding both likelihood ingredients: the sum of
/// log intensities at the observed events (left limits, so an event never
/// sees itself) and the Simpson compensator. zero_intensity is set when an
/// observed event sits in a clamped region.
struct LikelihoodTerms {
  double sum_log_intensity = 0.0;
  double compensator = 0.0;
  bool zero_intensity = false;
};

LikelihoodTerms likelihood_terms(const ModelParams& params, const EventData& data,
                                 const SegmentGrid& grid);

enum class CrossingDirection { kDown, kUp };

/// Zero crossing of the raw activation inside a segment, from the
/// equal-beta closed form.
struct RootCrossing {
  double time = 0.0;
  CrossingDirection direction = CrossingDirection::kUp;
};

/// Closed-form zero crossing of the raw activation of `dim` inside the
/// open segment (seg_a, seg_b), with history frozen to events at or before
/// seg_a. Requires beta_diag == beta_off. Returns nullopt when the
/// activation does not change sign inside the segment. With positive
/// background rates any crossing exits the clamp (the single pooled
/// exponential is monotone within a segment), so the reported direction is
/// up whenever a root exists.
std::optional<RootCrossing> roots_equal_beta(const ModelParams& params,
                                             const EventData& data,
                                             std::size_t dim, double seg_a,
                                             double seg_b);

/// Exact compensator for the equal-beta exponential kernel: per segment the
/// clamped region is split off at the closed-form root and the positive
/// part is integrated analytically. Used as the oracle for the Simpson
/// path and as an optional fast path. Requires beta_diag == beta_off.
///
/// There is deliberately no general-beta root solver: with distinct decay
/// rates the crossing condition becomes a high-order polynomial per
/// segment, and the Simpson path above is the supported route.
double compensator_exact_equal_beta(const ModelParams& params, const EventData& data);

}  // namespace hawkes
