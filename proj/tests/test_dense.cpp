#include <random>

#include "doctest.h"
#include "regipm/dense.hpp"
#include "support/oracles.hpp"

using namespace regipm;

TEST_CASE("jacobi eigensolver on closed-form matrices") {
  auto eye = dense_symmetric_eig(DenseMatrix::identity(4));
  for (double v : eye.values) CHECK(v == doctest::Approx(1.0));

  DenseMatrix d(2, 2);
  d(0, 0) = -2.0;
  d(1, 1) = 3.0;
  auto de = dense_symmetric_eig(d);
  CHECK(de.values[0] == doctest::Approx(-2.0));
  CHECK(de.values[1] == doctest::Approx(3.0));

  DenseMatrix flip(2, 2);
  flip(0, 1) = flip(1, 0) = 1.0;
  auto fe = dense_symmetric_eig(flip);
  CHECK(fe.values[0] == doctest::Approx(-1.0));
  CHECK(fe.values[1] == doctest::Approx(1.0));
}

TEST_CASE("jacobi reconstruction and residuals on random symmetric matrices") {
  std::mt19937 rng(5);
  for (int n : {10, 40, 120, 200}) {
    DenseMatrix m = testing::random_dense(n, n, rng, 0.6);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i);
    auto eig = dense_symmetric_eig(m);
    double norm = m.inf_norm();
    // Per-pair residual ||Mv - lambda v||.
    for (int k = 0; k < n; ++k) {
      std::vector<double> v(n);
      for (int i = 0; i < n; ++i) v[i] = eig.vectors(i, k);
      auto mv = m.multiply(v);
      double res = 0.0;
      for (int i = 0; i < n; ++i) res += (mv[i] - eig.values[k] * v[i]) * (mv[i] - eig.values[k] * v[i]);
      CHECK(std::sqrt(res) <= 1e-9 * std::max(norm, 1.0));
    }
    // Reconstruction V diag(L) V^T == M.
    DenseMatrix vl = eig.vectors;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) vl(i, j) *= eig.values[j];
    DenseMatrix rec = vl.multiply(eig.vectors.transpose());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(std::fabs(rec(i, j) - m(i, j)) <= 1e-9 * std::max(norm, 1.0));
    // Ascending order.
    for (int k = 1; k < n; ++k) CHECK(eig.values[k - 1] <= eig.values[k]);
  }
}

TEST_CASE("eig dimension cap") {
  CHECK_THROWS_AS(dense_symmetric_eig(DenseMatrix(401, 401)), std::invalid_argument);
}

TEST_CASE("inertia of quasi-definite matrices with extreme scaling") {
  std::mt19937 rng(9);
  auto q = testing::random_quasidefinite(12, 8, rng);
  // Stretch scales far apart: congruence by a diagonal keeps inertia.
  DenseMatrix m = q.M;
  for (int i = 0; i < m.rows; ++i) {
    double s = (i % 3 == 0) ? 1e8 : (i % 3 == 1 ? 1.0 : 1e-7);
    for (int j = 0; j < m.cols; ++j) {
      m(i, j) *= s;
      m(j, i) *= s;
    }
  }
  auto in = dense_inertia(m);
  CHECK(in.neg == 12);
  CHECK(in.pos == 8);
  CHECK(in.zero == 0);
}

TEST_CASE("dense cholesky and ldlt solve") {
  std::mt19937 rng(13);
  DenseMatrix spd = testing::random_spd(10, rng);
  DenseMatrix L;
  REQUIRE(dense_cholesky(spd, L));
  DenseMatrix rec = L.multiply(L.transpose());
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      CHECK(std::fabs(rec(i, j) - spd(i, j)) <= 1e-10 * (1.0 + spd.inf_norm()));

  DenseMatrix indef(2, 2);
  indef(0, 0) = 1.0;
  indef(0, 1) = indef(1, 0) = 2.0;
  indef(1, 1) = 1.0;
  CHECK_FALSE(dense_cholesky(indef, L));

  std::vector<double> b(10);
  for (int i = 0; i < 10; ++i) b[i] = i - 4.5;
  auto x = dense_solve_ldlt(spd, b);
  auto want = testing::dense_lu_solve(spd, b);
  for (int i = 0; i < 10; ++i) CHECK(x[i] == doctest::Approx(want[i]).epsilon(1e-9));
}

TEST_CASE("singular extremes against hand SVD") {
  // [[0,1],[0,0]]: singular values {1, 0}.
  DenseMatrix n2(2, 2);
  n2(0, 1) = 1.0;
  auto s = dense_singular_extremes(n2);
  CHECK(s.max == doctest::Approx(1.0));
  CHECK(s.min == doctest::Approx(0.0));

  DenseMatrix d(2, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  auto s2 = dense_singular_extremes(d);
  CHECK(s2.max == doctest::Approx(3.0));
  CHECK(s2.min == doctest::Approx(1.0));
}
