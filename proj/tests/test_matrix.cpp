#include <doctest.h>

#include <random>

#include "hawkes/matrix.hpp"

#include "support/oracles.hpp"

using hawkes::Matrix;

TEST_SUITE("matrix") {

TEST_CASE("identity and arithmetic") {
  const Matrix eye = Matrix::identity(3);
  Matrix a(3);
  a(0, 1) = 2.0;
  a(2, 0) = -1.0;
  const Matrix sum = a + eye;
  CHECK(sum(0, 0) == 1.0);
  CHECK(sum(0, 1) == 2.0);
  const Matrix diff = sum - eye;
  CHECK(diff == a);

  const Matrix prod = a * eye;
  CHECK(prod == a);
}

TEST_CASE("transpose and matrix-vector product") {
  Matrix a(2);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;
  a(1, 0) = 3.0;
  a(1, 1) = 4.0;
  const Matrix at = transpose(a);
  CHECK(at(0, 1) == 3.0);
  CHECK(at(1, 0) == 2.0);

  const auto y = multiply(a, {1.0, 1.0});
  CHECK(y[0] == doctest::Approx(3.0));
  CHECK(y[1] == doctest::Approx(7.0));
}

TEST_CASE("inverse round trip on random matrices") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + trial % 5;
    Matrix a = oracles::random_matrix(m, -2.0, 2.0, rng);
    for (std::size_t i = 0; i < m; ++i) a(i, i) += 3.0;  // keep well conditioned
    const Matrix prod = a * inverse(a);
    const Matrix err = prod - Matrix::identity(m);
    CHECK(max_abs_entry(err) < 1e-10);
  }
}

TEST_CASE("singular matrix raises") {
  Matrix a(2);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;
  a(1, 0) = 2.0;
  a(1, 1) = 4.0;
  CHECK_THROWS_AS((void)inverse(a), hawkes::SingularMatrixError);

  Matrix zero_row(2);
  zero_row(0, 0) = 1.0;
  CHECK_THROWS_AS((void)inverse(zero_row), hawkes::SingularMatrixError);
}

TEST_CASE("max column sum") {
  Matrix a(2);
  a(0, 0) = 0.5;
  a(0, 1) = 1.0;
  a(1, 0) = -2.0;
  a(1, 1) = 0.5;
  CHECK(max_column_sum(a) == doctest::Approx(2.5));
}

TEST_CASE("cholesky factors SPD matrices") {
  std::mt19937_64 rng(11);
  const Matrix b = oracles::random_matrix(4, -1.0, 1.0, rng);
  Matrix spd = b * transpose(b);
  for (std::size_t i = 0; i < 4; ++i) spd(i, i) += 0.5;
  const Matrix l = cholesky(spd);
  const Matrix err = l * transpose(l) - spd;
  CHECK(max_abs_entry(err) < 1e-12);

  Matrix not_pd(2);
  not_pd(0, 0) = -1.0;
  not_pd(1, 1) = 1.0;
  CHECK_THROWS_AS((void)cholesky(not_pd), hawkes::SingularMatrixError);
}

}  // TEST_SUITE
