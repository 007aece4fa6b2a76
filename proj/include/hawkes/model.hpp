#pragma once

#include <cstddef>

#include "hawkes/event_data.hpp"
#include "hawkes/model_params.hpp"

namespace hawkes {

/// Pre-link activation mu_dim + sum over events strictly before t of
/// K[j][dim] * g_j,dim(t - t_jl). May be negative under inhibition.
/// Events exactly at t do not contribute (evaluation is the left limit).
/// Throws std::out_of_range for a bad dimension and std::domain_error
/// for t outside [0, t_max].
double raw_activation(const ModelParams& params, const EventData& data,
                      std::size_t dim, double t);

/// ReLU-linked intensity max(0, raw_activation(...)).
double intensity(const ModelParams& params, const EventData& data,
                 std::size_t dim, double t);

/// Log-likelihood of the point process given a precomputed compensator
/// value. When some observed event sits at zero intensity the likelihood
/// is zero; that case is reported with `zero_intensity` set and `value`
/// pinned to the lowest representable double, never a NaN.
struct LogLikelihood {
  double value = 0.0;
  bool zero_intensity = false;
};

LogLikelihood log_likelihood(const ModelParams& params, const EventData& data,
                             double compensator);

}  // namespace hawkes
