#pragma once

#include <cstddef>
#include <vector>

#include "hawkes/matrix.hpp"

namespace hawkes {

/// Natural parametrization of the model: background rates mu, signed
/// influence matrix k (k(i,j) = average direct offsprings an event in
/// dimension i produces in dimension j), and the two-level exponential
/// decay structure (beta_diag for self-influence, beta_off across
/// dimensions).
struct ModelParams {
  std::vector<double> mu;
  Matrix k;
  double beta_diag = 1.0;
  double beta_off = 1.0;

  std::size_t dims() const noexcept { return mu.size(); }

  double beta(std::size_t i, std::size_t j) const noexcept {
    return i == j ? beta_diag : beta_off;
  }

  /// Influence kernel g_ij(x) = beta_ij * exp(-beta_ij * x) for x >= 0,
  /// 0 for x < 0. Integrates to one over [0, inf).
  double kernel(std::size_t i, std::size_t j, double x) const;

  /// Throws std::invalid_argument when mu has a non-positive entry, the
  /// betas are non-positive, or k does not match the dimension count.
  /// Entries of k are unrestricted in sign.
  void validate() const;
};

}  // namespace hawkes
