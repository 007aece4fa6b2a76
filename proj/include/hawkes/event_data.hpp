#pragma once

#include <cstddef>
#include <vector>

namespace hawkes {

/// Multivariate event-time record over [0, t_max]. times[m] holds the event
/// times of dimension m in strictly increasing order; ties across dimensions
/// are allowed.
struct EventData {
  double t_max = 0.0;
  std::vector<std::vector<double>> times;

  std::size_t dims() const noexcept { return times.size(); }

  std::vector<std::size_t> counts() const {
    std::vector<std::size_t> out;
    out.reserve(times.size());
    for (const auto& row : times) out.push_back(row.size());
    return out;
  }

  std::size_t total_count() const {
    std::size_t n = 0;
    for (const auto& row : times) n += row.size();
    return n;
  }

  /// Throws std::invalid_argument on any invariant violation: t_max < 0,
  /// empty dimension list, times outside [0, t_max], or per-dimension
  /// ordering that is not strictly increasing.
  void validate() const;
};

}  // namespace hawkes
