#pragma once

#include "hawkes/matrix.hpp"

namespace hawkes {

/// Verdicts and spectral quantities for the three stability conditions:
///   c1: rho(abs(K)) < 1
///   c2: max column sum of K+ < 1
///   c3: rho(K+) < 1
/// c1 or c2 each imply c3; the converse does not hold. All comparisons are
/// strict, so a radius of exactly 1 reports unstable.
struct StabilityReport {
  bool c1 = false;
  bool c2 = false;
  bool c3 = false;
  double rho_abs = 0.0;
  double rho_plus = 0.0;
  double max_colsum_plus = 0.0;
};

/// Entrywise absolute value.
Matrix abs_matrix(const Matrix& k);

/// Entrywise max(K_ij, 0).
Matrix positive_part(const Matrix& k);

/// Spectral radius of an entrywise non-negative matrix. Power iteration
/// with a diagonal shift; falls back to a normalized repeated-squaring
/// (Gelfand) estimate when the dominant eigenvalue is defective or the
/// iteration otherwise stalls. Exactly nilpotent input (a^M = 0) returns 0.
/// Throws std::invalid_argument when an entry is negative.
double spectral_radius(const Matrix& a);

bool check_c1(const Matrix& k);
bool check_c2(const Matrix& k);
bool check_c3(const Matrix& k);

StabilityReport stability_report(const Matrix& k);

}  // namespace hawkes
