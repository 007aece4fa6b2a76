#include "hawkes/reparam.hpp"

#include <stdexcept>

#include "hawkes/stability.hpp"

namespace hawkes {

Matrix k_to_kstar(const Matrix& k) {
  const Matrix eye = Matrix::identity(k.size());
  return inverse(eye - k) - eye;
}

Matrix kstar_to_k(const Matrix& k_star) {
  const Matrix eye = Matrix::identity(k_star.size());
  return eye - inverse(k_star + eye);
}

std::vector<double> expected_counts(const ModelParams& params, double t_max) {
  params.validate();
  if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be non-negative");
  if (!check_c3(params.k)) {
    throw std::domain_error("expected_counts requires stable parameters (C3)");
  }
  const Matrix k_star = k_to_kstar(params.k);
  const Matrix eye = Matrix::identity(k_star.size());
  std::vector<double> n = multiply(transpose(k_star + eye), params.mu);
  for (double& v : n) v *= t_max;
  return n;
}

}  // namespace hawkes
