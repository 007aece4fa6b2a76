#include "hawkes/stability.hpp"

#include <cmath>
#include <stdexcept>

namespace hawkes {

namespace {

bool is_zero(const Matrix& a) {
  for (double v : a.data())
    if (v != 0.0) return false;
  return true;
}

// Gelfand estimate rho = lim ||A^k||^(1/k) via repeated squaring of a
// normalized power, tracking the accumulated log norm. Converges from
// above for any non-negative matrix, including defective and periodic
// cases where plain power iteration stalls.
double gelfand_radius(const Matrix& a) {
  Matrix c = a;
  double norm = max_column_sum(c);
  if (norm == 0.0) return 0.0;
  double log_scale = std::log(norm);
  for (double& v : c.data()) v /= norm;

  double estimate = norm;
  double exponent = 1.0;  // c approximates A^exponent / exp(log_scale)
  for (int step = 0; step < 56; ++step) {
    c = c * c;
    exponent *= 2.0;
    norm = max_column_sum(c);
    if (norm == 0.0) return 0.0;
    log_scale = 2.0 * log_scale + std::log(norm);
    for (double& v : c.data()) v /= norm;
    const double next = std::exp(log_scale / exponent);
    if (std::abs(next - estimate) <= 1e-13 * std::max(1.0, next)) {
      return next;
    }
    estimate = next;
  }
  return estimate;
}

}  // namespace

Matrix abs_matrix(const Matrix& k) {
  Matrix out = k;
  for (double& v : out.data()) v = std::abs(v);
  return out;
}

Matrix positive_part(const Matrix& k) {
  Matrix out = k;
  for (double& v : out.data()) v = std::max(v, 0.0);
  return out;
}

double spectral_radius(const Matrix& a) {
  const std::size_t m = a.size();
  if (m == 0) throw std::invalid_argument("spectral_radius requires a non-empty matrix");
  for (double v : a.data()) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("spectral_radius requires non-negative entries");
    }
  }

  // Exact nilpotency (a^M = 0) short-circuits to 0; for non-negative
  // matrices this is the only way the shifted iteration below could stall
  // at a zero iterate.
  Matrix pw = a;
  for (std::size_t i = 1; i < m && !is_zero(pw); ++i) pw = pw * a;
  if (is_zero(pw)) return 0.0;

  // Power iteration on A + I. The shift makes irreducible matrices
  // primitive, so the dominant Perron value rho(A) + 1 is reached even for
  // periodic structure. Non-negativity means the 1-norm of the iterate is
  // just its entry sum.
  const double shift = 1.0;
  std::vector<double> x(m, 1.0 / static_cast<double>(m));
  std::vector<double> y(m, 0.0);
  double prev = 0.0;
  for (std::size_t iter = 0; iter < 100000; ++iter) {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double s = shift * x[i];
      for (std::size_t j = 0; j < m; ++j) s += a(i, j) * x[j];
      y[i] = s;
      total += s;
    }
    if (!(total > 0.0) || !std::isfinite(total)) break;
    for (std::size_t i = 0; i < m; ++i) x[i] = y[i] / total;
    if (iter > 0 && std::abs(total - prev) <= 1e-13 * std::max(1.0, total)) {
      return std::max(0.0, total - shift);
    }
    prev = total;
  }

  // Defective dominant eigenvalue (e.g. a Jordan block) gives only O(1/k)
  // convergence above; the squaring estimate handles those.
  return gelfand_radius(a);
}

bool check_c1(const Matrix& k) { return spectral_radius(abs_matrix(k)) < 1.0; }

bool check_c2(const Matrix& k) { return max_column_sum(positive_part(k)) < 1.0; }

bool check_c3(const Matrix& k) { return spectral_radius(positive_part(k)) < 1.0; }

StabilityReport stability_report(const Matrix& k) {
  StabilityReport r;
  r.rho_abs = spectral_radius(abs_matrix(k));
  r.rho_plus = spectral_radius(positive_part(k));
  r.max_colsum_plus = max_column_sum(positive_part(k));
  r.c1 = r.rho_abs < 1.0;
  r.c2 = r.max_colsum_plus < 1.0;
  r.c3 = r.rho_plus < 1.0;
  return r;
}

}  // namespace hawkes
