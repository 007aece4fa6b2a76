#pragma once

#include <vector>

#include "hawkes/matrix.hpp"
#include "hawkes/model_params.hpp"

namespace hawkes {

/// Total-offspring matrix K* = (I - K)^-1 - I. Entry (i, j) is the average
/// number of direct plus indirect offsprings an immigrant in dimension i
/// produces in dimension j; negative entries summarize negative
/// contributions across dimensions. Defined only for stable K; a singular
/// (I - K) raises SingularMatrixError.
Matrix k_to_kstar(const Matrix& k);

/// Inverse map K = I - (K* + I)^-1, the exact inverse of k_to_kstar.
Matrix kstar_to_k(const Matrix& k_star);

/// Expected event counts per dimension over [0, t_max]:
/// N = (K* + I)^T mu * t_max. Requires stable parameters (C3); throws
/// std::domain_error otherwise.
std::vector<double> expected_counts(const ModelParams& params, double t_max);

}  // namespace hawkes
