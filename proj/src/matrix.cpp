#include "hawkes/matrix.hpp"

#include <cmath>
#include <utility>

namespace hawkes {

namespace {

void require_same_size(const Matrix& a, const Matrix& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("matrix size mismatch");
  }
}

}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_size(a, b);
  Matrix out = a;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_size(a, b);
  Matrix out = a;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_size(a, b);
  const std::size_t m = a.size();
  Matrix out(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix out = a;
  for (double& v : out.data()) v *= s;
  return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.size() == b.size() && a.data() == b.data();
}

Matrix transpose(const Matrix& a) {
  const std::size_t m = a.size();
  Matrix out(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out(j, i) = a(i, j);
  return out;
}

std::vector<double> multiply(const Matrix& a, const std::vector<double>& x) {
  const std::size_t m = a.size();
  if (x.size() != m) throw std::invalid_argument("matrix-vector size mismatch");
  std::vector<double> out(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out[i] += a(i, j) * x[j];
  return out;
}

Matrix inverse(const Matrix& a) {
  const std::size_t m = a.size();
  if (m == 0) throw std::invalid_argument("cannot invert empty matrix");

  // Row scales for the pivot guard, taken from the original matrix.
  std::vector<double> scale(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) scale[i] = std::max(scale[i], std::abs(a(i, j)));
    if (scale[i] == 0.0) throw SingularMatrixError("matrix has a zero row");
  }

  Matrix work = a;
  Matrix inv = Matrix::identity(m);
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    double best = std::abs(work(col, col)) / scale[col];
    for (std::size_t r = col + 1; r < m; ++r) {
      const double cand = std::abs(work(r, col)) / scale[r];
      if (cand > best) {
        best = cand;
        pivot = r;
      }
    }
    if (best < 1e-12) {
      throw SingularMatrixError("pivot below 1e-12 of row scale; matrix is singular");
    }
    if (pivot != col) {
      for (std::size_t j = 0; j < m; ++j) {
        std::swap(work(col, j), work(pivot, j));
        std::swap(inv(col, j), inv(pivot, j));
      }
      std::swap(scale[col], scale[pivot]);
    }
    const double p = work(col, col);
    for (std::size_t j = 0; j < m; ++j) {
      work(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = work(r, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        work(r, j) -= f * work(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

double max_column_sum(const Matrix& a) {
  const std::size_t m = a.size();
  double best = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

double max_abs_entry(const Matrix& a) {
  double best = 0.0;
  for (double v : a.data()) best = std::max(best, std::abs(v));
  return best;
}

Matrix cholesky(const Matrix& a) {
  const std::size_t m = a.size();
  Matrix l(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 0.0) throw SingularMatrixError("matrix is not positive definite");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

}  // namespace hawkes
