#include <cmath>
#include <random>

#include "doctest.h"
#include "regipm/dense.hpp"
#include "regipm/regularizer.hpp"
#include "support/oracles.hpp"

using namespace regipm;

TEST_CASE("schedule follows mu and floors at epsilon") {
  RegSchedule s = make_schedule(1e-6, 10.0);
  CHECK(s.reg_thr == 1.0);
  CHECK(s.epsilon == doctest::Approx(std::max(0.1 * 1e-6 / 100.0, 1e-13)));

  update_schedule(s, 2.0, 1.0);
  CHECK(s.reg_thr == doctest::Approx(0.5));

  RegSchedule f = make_schedule(1e-6, 10.0);
  f.reg_thr = 2.0 * f.epsilon;
  update_schedule(f, 100.0, 1.0);
  CHECK(f.reg_thr == f.epsilon);

  RegSchedule g = make_schedule(1e-6, 10.0);
  g.reg_thr = 0.25;
  update_schedule(g, 1.0, 5.0);  // mu grew: clamp keeps reg_thr
  CHECK(g.reg_thr == 0.25);

  CHECK_THROWS_AS(update_schedule(g, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("epsilon floor at 1e-13 for large matrices") {
  RegSchedule s = make_schedule(1e-6, 1e6);
  CHECK(s.epsilon == 1e-13);
}

TEST_CASE("column partition") {
  std::vector<double> theta{1e-8, 1.0};
  auto p = partition_columns(theta, 1e-4, 1.0, std::nullopt);
  CHECK(p.indicesN == std::vector<int>{0});
  CHECK(p.indicesB == std::vector<int>{1});

  std::vector<double> big{1.0, 2.0};
  auto q = partition_columns(big, 1e-4, 1.0, std::nullopt);
  CHECK(q.indicesN.empty());
  CHECK(q.indicesB.size() == 2);

  // QP: passes the A test but fails the Q test -> stays in B.
  std::vector<double> t2{1e-8};
  auto r = partition_columns(t2, 1e-4, 1.0, 1e6);
  CHECK(r.indicesN.empty());
  CHECK(r.indicesB == std::vector<int>{0});
}

TEST_CASE("theta clamping") {
  std::vector<double> t{0.0, 1e40, 5.0};
  clamp_theta(t);
  CHECK(t[0] == 1e-30);
  CHECK(t[1] == 1e30);
  CHECK(t[2] == 5.0);
}

TEST_CASE("uniform plan") {
  RegSchedule s = make_schedule(1e-6, 1.0);
  s.reg_thr = 1e-3;
  auto lp = uniform_plan(s, false);
  CHECK(lp.mode == RegMode::Uniform);
  CHECK(lp.delta_d == 1e-3);
  CHECK(lp.delta_pN == 0.0);
  auto qp = uniform_plan(s, true);
  CHECK(qp.delta_pN == 1e-3);
  CHECK(qp.delta_pB == 1e-3);
  s.reg_thr = s.epsilon;
  CHECK(uniform_plan(s, false).delta_d == s.epsilon);
}

TEST_CASE("LP normal matrix: diagonal A") {
  // A = I2, Theta = (1e-9, 1), N = {0}: nothing to drop, delta_d = 1e-9.
  auto A = SparseMatrix::identity(2);
  std::vector<double> theta{1e-9, 1.0};
  ColumnPartition part{{0}, {1}};
  auto sys = build_lp_normal_matrix<double>(A, theta, part, 1e-4);
  CHECK(sys.delta_d == doctest::Approx(1e-9));
  CHECK(sys.matrix.coeff(0, 0) == doctest::Approx(1e-9 + 1e-9));
  CHECK(sys.matrix.coeff(1, 1) == doctest::Approx(1.0 + 1e-9));
  CHECK(sys.matrix.coeff(1, 0) == 0.0);
}

TEST_CASE("LP normal matrix drops exactly the off part of the N block") {
  // A = [[1,1],[1,0]], Theta = (1e-9, 1), N = {0}.
  std::vector<Triplet> at{{0, 0, 1.0}, {1, 0, 1.0}, {0, 1, 1.0}};
  auto A = SparseMatrix::from_triplets(2, 2, at);
  std::vector<double> theta{1e-9, 1.0};
  ColumnPartition part{{0}, {1}};
  auto sys = build_lp_normal_matrix<double>(A, theta, part, 1e-4);
  // ||A_N A_N^T||_inf = ||[[1,1],[1,1]]||_inf = 2.
  CHECK(sys.delta_d == doctest::Approx(2e-9));
  // Dense oracle: A Theta A^T + R_d with R_d = delta_d I - off(A_N Theta_N A_N^T).
  DenseMatrix Ad = DenseMatrix::from_sparse(A);
  DenseMatrix want(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double full = 0.0;
      for (int k = 0; k < 2; ++k) full += Ad(i, k) * theta[k] * Ad(j, k);
      double off_n = (i != j) ? Ad(i, 0) * theta[0] * Ad(j, 0) : 0.0;
      want(i, j) = full - off_n + (i == j ? sys.delta_d : 0.0);
    }
  DenseMatrix got = DenseMatrix::from_sparse(sys.matrix);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(got(i, j) == doctest::Approx(want(i, j)).epsilon(1e-14));
  // The off-diagonal of the result holds only the B contribution (zero here).
  CHECK(sys.matrix.coeff(1, 0) == 0.0);
}

TEST_CASE("empty N routes to the uniform fallback") {
  auto A = SparseMatrix::identity(2);
  std::vector<double> theta{1.0, 1.0};
  ColumnPartition part{{}, {0, 1}};
  CHECK_THROWS_AS(build_lp_normal_matrix<double>(A, theta, part, 1.0), std::invalid_argument);
}

TEST_CASE("LP sparsity and R_d spectrum on random IPM-like instances") {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> zhat(0.5, 4.0);
  for (int trial = 0; trial < 12; ++trial) {
    const int m = 6 + trial, n = 2 * m;
    DenseMatrix Ad = testing::random_dense(m, n, rng, 0.45);
    auto A = testing::sparse_from_dense(Ad);
    // IPM-like split: half the columns heading to zero.
    const double mu = 1e-8;
    std::vector<double> theta(n);
    for (int j = 0; j < n; ++j) {
      double z = zhat(rng);
      theta[j] = (j % 2 == 0) ? mu / (z * z) : (z * z) / mu;
    }
    double norm_aat = inf_norm_sym(aat_product<double>(A, nullptr, nullptr));
    double reg_thr = 1e-4;
    auto part = partition_columns(theta, reg_thr, norm_aat, std::nullopt);
    if (part.indicesN.empty() || part.indicesB.empty()) continue;
    auto sys = build_lp_normal_matrix<double>(A, theta, part, reg_thr);

    // delta_d < reg_thr is guaranteed by the partition condition.
    CHECK(sys.delta_d < reg_thr);

    // Sparsity never degrades relative to the full product.
    auto full = aat_product<double>(A, &theta, nullptr);
    std::int64_t full_nnz_with_diag = full.nnz();
    for (int i = 0; i < m; ++i)
      if (full.coeff(i, i) == 0.0) ++full_nnz_with_diag;
    CHECK(sys.matrix.nnz() <= full_nnz_with_diag);

    // Explicit R_d = delta_d I - off(A_N Theta_N A_N^T): positive definite,
    // diagonally dominant, eigenvalues inside the Gershgorin window.
    std::vector<double> theta_n(part.indicesN.size());
    for (std::size_t k = 0; k < part.indicesN.size(); ++k)
      theta_n[k] = theta[part.indicesN[k]];
    auto a_n = A.select_columns(part.indicesN);
    DenseMatrix block = DenseMatrix::from_sparse(aat_product<double>(a_n, &theta_n, nullptr));
    DenseMatrix rd(m, m);
    double min_pos_diag = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) rd(i, j) = (i == j) ? sys.delta_d : -block(i, j);
      if (block(i, i) > 0.0) min_pos_diag = std::min(min_pos_diag, block(i, i));
    }
    bool dominant = true;
    for (int i = 0; i < m; ++i) {
      double off_sum = 0.0;
      for (int j = 0; j < m; ++j)
        if (j != i) off_sum += std::fabs(rd(i, j));
      if (off_sum > sys.delta_d) dominant = false;
    }
    CHECK(dominant);
    auto ev = dense_symmetric_eigenvalues(rd);
    if (!std::isinf(min_pos_diag)) CHECK(ev.front() >= min_pos_diag - 1e-12);
    CHECK(ev.front() > 0.0);
    CHECK(ev.back() < 2.0 * sys.delta_d);
  }
}

TEST_CASE("QP reduced system matches a literal dense assembly") {
  // n = 3, m = 2, N = {0}, B = {1, 2}; dense Q.
  std::mt19937 rng(55);
  DenseMatrix B0 = testing::random_dense(3, 3, rng);
  DenseMatrix Qd = B0.multiply(B0.transpose());
  DenseMatrix Ad = testing::random_dense(2, 3, rng);
  auto Q = testing::sparse_from_dense(Qd, Symmetry::SymmetricLower);
  auto A = testing::sparse_from_dense(Ad);
  std::vector<double> theta{1e-7, 3.0, 12.0};
  ColumnPartition part{{0}, {1, 2}};
  auto sys = build_qp_reduced_system<double>(A, Q, theta, part, 1e-3);

  const double delta_pN = std::fabs(Qd(0, 0));  // ||Q_N||_inf for the 1x1 block
  CHECK(sys.delta_pN == doctest::Approx(delta_pN));
  const double qbar = 1.0 / theta[0] + Qd(0, 0) + delta_pN;
  REQUIRE(sys.qbar_diag.size() == 1);
  CHECK(sys.qbar_diag[0] == doctest::Approx(qbar));

  // Dense oracle: form every block of the reduced system literally.
  const double w = 1.0 / qbar;
  std::vector<double> qbn{Qd(1, 0), Qd(2, 0)};
  std::vector<double> an{Ad(0, 0), Ad(1, 0)};
  const double delta_pB =
      w * std::max(std::fabs(qbn[0] * qbn[0]) + std::fabs(qbn[0] * qbn[1]),
                   std::fabs(qbn[1] * qbn[0]) + std::fabs(qbn[1] * qbn[1]));
  const double delta_d =
      w * std::max(std::fabs(an[0] * an[0]) + std::fabs(an[0] * an[1]),
                   std::fabs(an[1] * an[0]) + std::fabs(an[1] * an[1]));
  CHECK(sys.delta_pB == doctest::Approx(delta_pB));
  CHECK(sys.delta_d == doctest::Approx(delta_d));

  DenseMatrix want(4, 4);
  // (1,1): diag(Q_BN qbar^-1 Q_BN^T) - Q_B - Theta_B^-1 - delta_pB I.
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double schur = (i == j) ? w * qbn[i] * qbn[j] : 0.0;
      want(i, j) = schur - Qd(i + 1, j + 1) - (i == j ? 1.0 / theta[i + 1] + delta_pB : 0.0);
    }
  // (2,1): A_B - A_N qbar^-1 Q_BN^T.
  for (int r = 0; r < 2; ++r)
    for (int i = 0; i < 2; ++i) {
      want(2 + r, i) = Ad(r, i + 1) - an[r] * w * qbn[i];
      want(i, 2 + r) = want(2 + r, i);
    }
  // (2,2): diag(A_N qbar^-1 A_N^T) + delta_d I.
  for (int r = 0; r < 2; ++r) want(2 + r, 2 + r) = w * an[r] * an[r] + delta_d;

  DenseMatrix got = DenseMatrix::from_sparse(sys.matrix);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(got(i, j) == doctest::Approx(want(i, j)).epsilon(1e-12));
}

TEST_CASE("QP reduced system with Q = 0 degenerates to the LP structure") {
  std::mt19937 rng(77);
  DenseMatrix Ad = testing::random_dense(3, 6, rng, 0.6);
  auto A = testing::sparse_from_dense(Ad);
  auto Q = SparseMatrix::zero(6, 6, Symmetry::SymmetricLower);
  std::vector<double> theta{1e-8, 1e-7, 5.0, 9.0, 2.0, 1e-9};
  ColumnPartition part{{0, 1, 5}, {2, 3, 4}};
  auto sys = build_qp_reduced_system<double>(A, Q, theta, part, 1e-3);
  // Qbar_N = Theta_N^{-1}.
  CHECK(sys.qbar_diag[0] == doctest::Approx(1.0 / theta[0]));
  CHECK(sys.delta_pN == 0.0);
  CHECK(sys.delta_pB == 0.0);
  // (1,1) block is -Theta_B^{-1} on the diagonal.
  CHECK(sys.matrix.coeff(0, 0) == doctest::Approx(-1.0 / theta[2]));
  CHECK(sys.matrix.coeff(1, 0) == 0.0);
  // (2,2) equals the LP D* = diag(A_N Theta_N A_N^T) + delta_d I.
  auto lp = build_lp_normal_matrix<double>(A, theta, part, 1e-3);
  CHECK(sys.delta_d == doctest::Approx(lp.delta_d));
  std::vector<double> theta_n{theta[0], theta[1], theta[5]};
  auto a_n = A.select_columns(part.indicesN);
  auto nblock = aat_product<double>(a_n, &theta_n, nullptr);
  for (int r = 0; r < 3; ++r)
    CHECK(sys.matrix.coeff(3 + r, 3 + r) ==
          doctest::Approx(nblock.coeff(r, r) + sys.delta_d).epsilon(1e-12));
}

TEST_CASE("QP reduced system with N = everything is an m x m positive block") {
  std::mt19937 rng(88);
  DenseMatrix Ad = testing::random_dense(2, 4, rng, 0.8);
  auto A = testing::sparse_from_dense(Ad);
  DenseMatrix B0 = testing::random_dense(4, 4, rng, 0.5);
  DenseMatrix Qd = B0.multiply(B0.transpose());
  auto Q = testing::sparse_from_dense(Qd, Symmetry::SymmetricLower);
  std::vector<double> theta{1e-9, 1e-8, 1e-9, 1e-7};
  ColumnPartition part{{0, 1, 2, 3}, {}};
  auto sys = build_qp_reduced_system<double>(A, Q, theta, part, 1e-2);
  CHECK(sys.matrix.rows() == 2);
  auto ev = dense_symmetric_eigenvalues(DenseMatrix::from_sparse(sys.matrix));
  CHECK(ev.front() > 0.0);
}

TEST_CASE("R_pN spectrum window on a random PSD block") {
  // Eigenvalues of R_pN = delta_pN I - off(Q_N) live in
  // (min positive diag(Q_N), 2 delta_pN) when Q_N is PSD.
  std::mt19937 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    int n1 = 4 + trial;
    DenseMatrix B0 = testing::random_dense(n1, n1, rng, 0.7);
    DenseMatrix Qn = B0.multiply(B0.transpose());
    double delta_pN = Qn.inf_norm();
    DenseMatrix rpn(n1, n1);
    double min_pos_diag = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n1; ++j) rpn(i, j) = (i == j) ? delta_pN : -Qn(i, j);
      if (Qn(i, i) > 0.0) min_pos_diag = std::min(min_pos_diag, Qn(i, i));
    }
    auto ev = dense_symmetric_eigenvalues(rpn);
    CHECK(ev.front() > 0.0);
    CHECK(ev.back() < 2.0 * delta_pN);
    CHECK(ev.front() >= std::min(min_pos_diag, delta_pN) - 1e-10);
  }
}
