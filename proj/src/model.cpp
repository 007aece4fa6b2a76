#include "hawkes/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hawkes {

double ModelParams::kernel(std::size_t i, std::size_t j, double x) const {
  if (x < 0.0) return 0.0;
  const double b = beta(i, j);
  return b * std::exp(-b * x);
}

void ModelParams::validate() const {
  if (mu.empty()) throw std::invalid_argument("mu must have at least one entry");
  for (double m : mu) {
    if (!std::isfinite(m) || m <= 0.0) {
      throw std::invalid_argument("mu entries must be finite and strictly positive");
    }
  }
  if (!std::isfinite(beta_diag) || beta_diag <= 0.0 || !std::isfinite(beta_off) ||
      beta_off <= 0.0) {
    throw std::invalid_argument("beta_diag and beta_off must be finite and strictly positive");
  }
  if (k.size() != mu.size()) {
    throw std::invalid_argument("k must be an MxM matrix matching mu");
  }
  for (double v : k.data()) {
    if (!std::isfinite(v)) throw std::invalid_argument("k entries must be finite");
  }
}

void EventData::validate() const {
  if (times.empty()) throw std::invalid_argument("at least one dimension required");
  if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be non-negative");
  for (const auto& row : times) {
    double prev = -1.0;
    for (double t : row) {
      if (!(t >= 0.0) || t > t_max) {
        throw std::invalid_argument("event time outside [0, t_max]");
      }
      if (t <= prev) {
        throw std::invalid_argument("event times must be strictly increasing per dimension");
      }
      prev = t;
    }
  }
}

double raw_activation(const ModelParams& params, const EventData& data,
                      std::size_t dim, double t) {
  if (dim >= data.dims()) throw std::out_of_range("dimension index out of range");
  if (!(t >= 0.0) || t > data.t_max) throw std::domain_error("t outside [0, t_max]");

  double a = params.mu[dim];
  for (std::size_t j = 0; j < data.dims(); ++j) {
    const double b = params.beta(j, dim);
    const double coef = params.k(j, dim) * b;
    if (coef == 0.0) continue;
    for (double s : data.times[j]) {
      if (s >= t) break;  // strictly earlier events only
      a += coef * std::exp(-b * (t - s));
    }
  }
  return a;
}

double intensity(const ModelParams& params, const EventData& data,
                 std::size_t dim, double t) {
  return std::max(0.0, raw_activation(params, data, dim, t));
}

LogLikelihood log_likelihood(const ModelParams& params, const EventData& data,
                             double compensator) {
  double sum = 0.0;
  for (std::size_t m = 0; m < data.dims(); ++m) {
    for (double t : data.times[m]) {
      const double lam = intensity(params, data, m, t);
      if (lam <= 0.0) {
        return {std::numeric_limits<double>::lowest(), true};
      }
      sum += std::log(lam);
    }
  }
  return {sum - compensator, false};
}

}  // namespace hawkes
