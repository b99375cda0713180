#include <random>

#include "doctest.h"
#include "regipm/dense.hpp"
#include "regipm/sparse.hpp"
#include "support/oracles.hpp"

using namespace regipm;

TEST_CASE("from_triplets builds canonical CSC") {
  std::vector<Triplet> id{{0, 0, 1.0}, {1, 1, 1.0}};
  auto m = SparseMatrix::from_triplets(2, 2, id);
  CHECK(m.nnz() == 2);
  CHECK(m.coeff(0, 0) == 1.0);
  CHECK(m.coeff(1, 1) == 1.0);
  CHECK(m.coeff(0, 1) == 0.0);

  std::vector<Triplet> dup{{0, 0, 1.0}, {0, 0, 2.0}};
  auto d = SparseMatrix::from_triplets(2, 2, dup);
  CHECK(d.nnz() == 1);
  CHECK(d.coeff(0, 0) == 3.0);

  std::vector<Triplet> oob{{2, 0, 1.0}};
  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, oob), std::out_of_range);
}

TEST_CASE("from_triplets invariants on random input") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> idx(0, 19);
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Triplet> trips;
    for (int k = 0; k < 120; ++k) trips.push_back({idx(rng), idx(rng), val(rng)});
    auto m = SparseMatrix::from_triplets(20, 20, trips);
    const auto& cp = m.col_ptr();
    CHECK(cp.front() == 0);
    CHECK(cp.back() == m.nnz());
    for (int c = 0; c < 20; ++c) {
      CHECK(cp[c] <= cp[c + 1]);
      for (int p = m.col_begin(c) + 1; p < m.col_end(c); ++p)
        CHECK(m.row_index(p - 1) < m.row_index(p));
    }
  }
}

TEST_CASE("spmv basics") {
  auto eye = SparseMatrix::identity(2);
  std::vector<double> v{3.0, 4.0};
  CHECK(eye.multiply(v) == std::vector<double>{3.0, 4.0});

  std::vector<Triplet> dt{{0, 0, 1.0}, {1, 1, 2.0}};
  auto diag = SparseMatrix::from_triplets(2, 2, dt);
  std::vector<double> ones{1.0, 1.0};
  CHECK(diag.multiply(ones) == std::vector<double>{1.0, 2.0});

  auto zero = SparseMatrix::zero(3, 2);
  CHECK(zero.multiply(ones) == std::vector<double>{0.0, 0.0, 0.0});

  std::vector<double> bad{1.0, 1.0, 1.0};
  CHECK_THROWS_AS(diag.multiply(bad), std::invalid_argument);
}

TEST_CASE("spmv honors symmetric-lower mirror") {
  // [[2, 3], [3, 5]] stored as lower triangle only.
  std::vector<Triplet> t{{0, 0, 2.0}, {1, 0, 3.0}, {1, 1, 5.0}};
  auto m = SparseMatrix::from_triplets(2, 2, t, Symmetry::SymmetricLower);
  std::vector<double> v{1.0, 2.0};
  auto r = m.multiply(v);
  CHECK(r[0] == doctest::Approx(8.0));
  CHECK(r[1] == doctest::Approx(13.0));
}

TEST_CASE("aat_product simple cases") {
  std::vector<Triplet> dt{{0, 0, 1.0}, {1, 1, 2.0}};
  auto A = SparseMatrix::from_triplets(2, 2, dt);
  std::vector<double> scale{1.0, 1.0};
  auto aat = aat_product<double>(A, &scale, nullptr);
  CHECK(aat.coeff(0, 0) == doctest::Approx(1.0));
  CHECK(aat.coeff(1, 1) == doctest::Approx(4.0));
  CHECK(aat.coeff(1, 0) == 0.0);

  std::vector<Triplet> rt{{0, 0, 1.0}, {0, 1, 1.0}};
  auto R = SparseMatrix::from_triplets(1, 2, rt);
  auto raat = aat_product<double>(R, &scale, nullptr);
  CHECK(raat.coeff(0, 0) == doctest::Approx(2.0));

  std::vector<Triplet> ct{{0, 0, 1.0}, {1, 1, 2.0}};
  auto C = SparseMatrix::from_triplets(2, 2, ct);
  std::vector<int> cols{1};
  std::vector<double> s3{3.0};
  auto one_col = aat_product<double>(C, &s3, &cols);
  CHECK(one_col.coeff(0, 0) == 0.0);
  CHECK(one_col.coeff(1, 1) == doctest::Approx(12.0));
}

TEST_CASE("aat_product matches dense oracle on random matrices") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> theta_dist(0.01, 10.0);
  for (int trial = 0; trial < 15; ++trial) {
    int m = 5 + trial, n = 8 + 2 * trial;  // n <= 50
    DenseMatrix Ad = testing::random_dense(m, n, rng, 0.4);
    auto A = testing::sparse_from_dense(Ad);
    std::vector<double> theta(n);
    for (double& t : theta) t = theta_dist(rng);
    auto got = DenseMatrix::from_sparse(aat_product<double>(A, &theta, nullptr));
    // dense: A diag(theta) A^T
    DenseMatrix want(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += Ad(i, k) * theta[k] * Ad(j, k);
        want(i, j) = acc;
      }
    double scale = want.inf_norm() + 1.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        CHECK(std::fabs(got(i, j) - want(i, j)) <= 1e-12 * scale);
  }
}

TEST_CASE("inf_norm_sym") {
  std::vector<Triplet> dt{{0, 0, 1.0}, {1, 1, 4.0}};
  CHECK(inf_norm_sym(SparseMatrix::from_triplets(2, 2, dt, Symmetry::SymmetricLower)) == 4.0);

  std::vector<Triplet> t{{0, 0, 2.0}, {1, 0, -3.0}, {1, 1, 1.0}};
  CHECK(inf_norm_sym(SparseMatrix::from_triplets(2, 2, t, Symmetry::SymmetricLower)) == 5.0);

  CHECK(inf_norm_sym(SparseMatrix::zero(3, 3, Symmetry::SymmetricLower)) == 0.0);
}

TEST_CASE("inf_norm_sym agrees with dense row sums") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 4 + 3 * trial;
    DenseMatrix d = testing::random_dense(n, n, rng, 0.5);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i);
    auto s = testing::sparse_from_dense(d, Symmetry::SymmetricLower);
    CHECK(inf_norm_sym(s) == doctest::Approx(d.inf_norm()).epsilon(1e-14));
  }
}

TEST_CASE("two_norm_estimate") {
  std::vector<Triplet> dt{{0, 0, 3.0}, {1, 1, 1.0}};
  CHECK_THROWS_AS(two_norm_estimate(SparseMatrix::from_triplets(2, 2, dt), 0),
                  std::invalid_argument);
  CHECK(two_norm_estimate(SparseMatrix::from_triplets(2, 2, dt)) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(two_norm_estimate(SparseMatrix::identity(5)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(two_norm_estimate(SparseMatrix::zero(3, 3)) == 0.0);
  // Nilpotent [[0,1],[0,0]]: brute-force SVD gives sigma_max = 1.
  std::vector<Triplet> nt{{0, 1, 1.0}};
  CHECK(two_norm_estimate(SparseMatrix::from_triplets(2, 2, nt)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("permute_symmetric") {
  std::vector<Triplet> dt{{0, 0, 1.0}, {1, 1, 2.0}};
  auto diag = SparseMatrix::from_triplets(2, 2, dt, Symmetry::SymmetricLower);
  std::vector<int> id{0, 1};
  auto same = permute_symmetric(diag, id);
  CHECK(same.coeff(0, 0) == 1.0);
  CHECK(same.coeff(1, 1) == 2.0);

  std::vector<int> swap{1, 0};
  auto swapped = permute_symmetric(diag, swap);
  CHECK(swapped.coeff(0, 0) == 2.0);
  CHECK(swapped.coeff(1, 1) == 1.0);

  std::vector<int> bad{0, 0};
  CHECK_THROWS_AS(permute_symmetric(diag, bad), std::invalid_argument);
}

TEST_CASE("permute_symmetric preserves the eigenvalue multiset") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 8; ++trial) {
    int n = 5 + 5 * trial;  // up to 40
    DenseMatrix d(n, n);
    for (int i = 0; i < n; ++i) {
      d(i, i) = 2.0 + i;
      if (i > 0) {
        d(i, i - 1) = -1.0;
        d(i - 1, i) = -1.0;
      }
    }
    auto tri = testing::sparse_from_dense(d, Symmetry::SymmetricLower);
    std::vector<int> rev(n);
    for (int i = 0; i < n; ++i) rev[i] = n - 1 - i;
    auto permuted = permute_symmetric(tri, rev);
    auto before = dense_symmetric_eigenvalues(DenseMatrix::from_sparse(tri));
    auto after = dense_symmetric_eigenvalues(DenseMatrix::from_sparse(permuted));
    for (int i = 0; i < n; ++i) CHECK(before[i] == doctest::Approx(after[i]).epsilon(1e-10));
  }
}

TEST_CASE("submatrix extraction against dense slicing") {
  std::mt19937 rng(23);
  DenseMatrix d = testing::random_dense(8, 8, rng, 0.7);
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) d(i, j) = d(j, i);
  auto s = testing::sparse_from_dense(d, Symmetry::SymmetricLower);
  std::vector<int> rows{1, 3, 6};
  std::vector<int> cols{0, 2, 5, 7};
  auto block = s.submatrix(rows, cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      CHECK(block.coeff(static_cast<int>(i), static_cast<int>(j)) ==
            doctest::Approx(d(rows[i], cols[j])));
}
