#pragma once

// Test-side oracles. Everything here recomputes results through an
// independent route (dense, brute force) and must stay decoupled from the
// library's own solve paths.

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "regipm/dense.hpp"
#include "regipm/sparse.hpp"

namespace regipm::testing {

// Gaussian elimination with partial pivoting; the reference linear solver.
inline std::vector<double> dense_lu_solve(DenseMatrix A, std::vector<double> b) {
  const int n = A.rows;
  if (A.cols != n || static_cast<int>(b.size()) != n)
    throw std::invalid_argument("dense_lu_solve: dimension mismatch");
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs(A(i, k)) > std::fabs(A(piv, k))) piv = i;
    if (A(piv, k) == 0.0) throw std::runtime_error("dense_lu_solve: singular matrix");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      double f = A(i, k) / A(k, k);
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) A(i, j) -= f * A(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    double acc = b[i];
    for (int j = i + 1; j < n; ++j) acc -= A(i, j) * x[j];
    x[i] = acc / A(i, i);
  }
  return x;
}

inline DenseMatrix random_dense(int rows, int cols, std::mt19937& rng, double density = 1.0) {
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  DenseMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (coin(rng) <= density) m(i, j) = val(rng);
  return m;
}

inline SparseMatrix sparse_from_dense(const DenseMatrix& d,
                                      Symmetry sym = Symmetry::General) {
  std::vector<Triplet> trips;
  for (int i = 0; i < d.rows; ++i)
    for (int j = 0; j < d.cols; ++j) {
      if (d(i, j) == 0.0) continue;
      if (sym == Symmetry::SymmetricLower && i < j) continue;
      trips.push_back({i, j, d(i, j)});
    }
  return SparseMatrix::from_triplets(d.rows, d.cols, trips, sym);
}

// Random symmetric positive definite matrix, diagonally shifted.
inline DenseMatrix random_spd(int n, std::mt19937& rng, double density = 0.6) {
  DenseMatrix b = random_dense(n, n, rng, density);
  DenseMatrix m = b.multiply(b.transpose());
  for (int i = 0; i < n; ++i) m(i, i) += 0.5 + 0.1 * n;
  return m;
}

// Random quasi-definite matrix [-E A^T; A F] with E, F positive definite.
struct QuasiDefinite {
  DenseMatrix M;
  int n1 = 0;  // negative block
  int n2 = 0;  // positive block
};

inline QuasiDefinite random_quasidefinite(int n1, int n2, std::mt19937& rng) {
  DenseMatrix E = random_spd(n1, rng);
  DenseMatrix F = random_spd(n2, rng);
  DenseMatrix A = random_dense(n2, n1, rng, 0.5);
  QuasiDefinite q;
  q.n1 = n1;
  q.n2 = n2;
  q.M = DenseMatrix(n1 + n2, n1 + n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) q.M(i, j) = -E(i, j);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j) q.M(n1 + i, n1 + j) = F(i, j);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n1; ++j) {
      q.M(n1 + i, j) = A(i, j);
      q.M(j, n1 + i) = A(i, j);
    }
  return q;
}

}  // namespace regipm::testing
