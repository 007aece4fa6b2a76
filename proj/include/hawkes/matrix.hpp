#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hawkes {

/// Thrown when a pivot collapses during Gaussian elimination, i.e. the
/// matrix is singular (or numerically indistinguishable from singular).
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense square matrix, row-major. Dimensions here are small (M <= ~20),
/// so everything is plain O(M^3) at most.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t m, double fill = 0.0) : m_(m), data_(m * m, fill) {}

  static Matrix identity(std::size_t m) {
    Matrix out(m);
    for (std::size_t i = 0; i < m; ++i) out(i, i) = 1.0;
    return out;
  }

  std::size_t size() const noexcept { return m_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * m_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * m_ + j]; }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

 private:
  std::size_t m_ = 0;
  std::vector<double> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
bool operator==(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

/// Matrix-vector product a * x.
std::vector<double> multiply(const Matrix& a, const std::vector<double>& x);

/// Inverse via Gauss-Jordan with partial pivoting. Throws
/// SingularMatrixError when the best available pivot falls below
/// 1e-12 of the row scale.
Matrix inverse(const Matrix& a);

double max_column_sum(const Matrix& a);
double max_abs_entry(const Matrix& a);

/// Cholesky factor L of a symmetric positive-definite matrix (a = L L^T).
/// Throws SingularMatrixError when a is not positive definite.
Matrix cholesky(const Matrix& a);

}  // namespace hawkes
