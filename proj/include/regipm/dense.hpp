#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "regipm/sparse.hpp"

namespace regipm {

// Row-major dense matrix for the verification side of the project. Sizes are
// capped by the spectral lab, so nothing here tries to be fast.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

  static DenseMatrix identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  template <typename T>
  static DenseMatrix from_sparse(const SparseMatrixT<T>& s) {
    DenseMatrix m(s.rows(), s.cols());
    for (int c = 0; c < s.cols(); ++c)
      for (int p = s.col_begin(c); p < s.col_end(c); ++p) {
        m(s.row_index(p), c) = to_double(s.value(p));
        if (s.symmetry() == Symmetry::SymmetricLower && s.row_index(p) != c)
          m(c, s.row_index(p)) = to_double(s.value(p));
      }
    return m;
  }

  DenseMatrix transpose() const {
    DenseMatrix t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<double> multiply(std::span<const double> v) const {
    if (static_cast<int>(v.size()) != cols) throw std::invalid_argument("dense multiply: dim");
    std::vector<double> out(rows, 0.0);
    for (int i = 0; i < rows; ++i) {
      double acc = 0.0;
      for (int j = 0; j < cols; ++j) acc += (*this)(i, j) * v[j];
      out[i] = acc;
    }
    return out;
  }

  DenseMatrix multiply(const DenseMatrix& other) const {
    if (cols != other.rows) throw std::invalid_argument("dense multiply: dim");
    DenseMatrix out(rows, other.cols);
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < cols; ++k) {
        double a = (*this)(i, k);
        if (a == 0.0) continue;
        for (int j = 0; j < other.cols; ++j) out(i, j) += a * other(k, j);
      }
    return out;
  }

  double inf_norm() const {
    double best = 0.0;
    for (int i = 0; i < rows; ++i) {
      double s = 0.0;
      for (int j = 0; j < cols; ++j) s += std::fabs((*this)(i, j));
      best = std::max(best, s);
    }
    return best;
  }
};

struct EigResult {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // columns are eigenvectors, orthonormal
};

inline constexpr int kDenseEigDimensionCap = 400;

// Cyclic Jacobi on a symmetric matrix; internally runs in long double.
// Throws if the dimension exceeds the desk-scale cap.
EigResult dense_symmetric_eig(const DenseMatrix& M);

// Eigenvalues only, still Jacobi underneath.
std::vector<double> dense_symmetric_eigenvalues(const DenseMatrix& M);

struct Inertia {
  int neg = 0;
  int pos = 0;
  int zero = 0;
};

// Inertia via Jacobi on the diagonally equilibrated congruent matrix
// D M D with D = diag(1/sqrt(|m_ii|)); Sylvester's law keeps the counts.
// Reliable even when the raw matrix mixes scales far beyond double range.
Inertia dense_inertia(const DenseMatrix& M);

// Dense Cholesky: M = L L^T. Returns false if a pivot is not positive.
bool dense_cholesky(const DenseMatrix& M, DenseMatrix& L);

// Solves M x = b through dense LDL^T without pivoting (quasi-definite use).
std::vector<double> dense_solve_ldlt(const DenseMatrix& M, std::span<const double> b);

// sigma_max / sigma_min(A) of a rectangular matrix via eig of A A^T or A^T A
// on the smaller side; sigma_min is the k-th singular value, k = min(m, n).
struct SingularExtremes {
  double max = 0.0;
  double min = 0.0;
};
SingularExtremes dense_singular_extremes(const DenseMatrix& A);

}  // namespace regipm
