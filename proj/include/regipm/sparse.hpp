#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "regipm/scalar.hpp"

namespace regipm {

template <typename T>
struct TripletT {
  int row = 0;
  int col = 0;
  T value = T(0);
};
using Triplet = TripletT<double>;

enum class Symmetry { General, SymmetricLower };

// Compressed-sparse-column matrix. SymmetricLower storage keeps only the
// lower triangle; every operation that consumes such a matrix mirrors the
// implied upper part. Row indices are strictly increasing within a column
// and duplicate triplets are summed on construction.
template <typename T>
class SparseMatrixT {
 public:
  SparseMatrixT() : nrows_(0), ncols_(0), col_ptr_(1, 0) {}

  static SparseMatrixT from_triplets(int nrows, int ncols,
                                     std::span<const TripletT<T>> entries,
                                     Symmetry sym = Symmetry::General) {
    if (nrows < 0 || ncols < 0) throw std::invalid_argument("negative dimension");
    for (const auto& t : entries) {
      if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
        throw std::out_of_range("triplet index out of range");
      if (sym == Symmetry::SymmetricLower && t.row < t.col)
        throw std::invalid_argument("upper-triangle entry in symmetric-lower matrix");
    }
    SparseMatrixT m;
    m.nrows_ = nrows;
    m.ncols_ = ncols;
    m.symmetry_ = sym;
    std::vector<TripletT<T>> sorted(entries.begin(), entries.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    m.col_ptr_.assign(ncols + 1, 0);
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      T sum = T(0);
      while (j < sorted.size() && sorted[j].col == sorted[i].col &&
             sorted[j].row == sorted[i].row) {
        sum += sorted[j].value;
        ++j;
      }
      if (sum != T(0)) {
        m.row_idx_.push_back(sorted[i].row);
        m.values_.push_back(sum);
        ++m.col_ptr_[sorted[i].col + 1];
      }
      i = j;
    }
    for (int c = 0; c < ncols; ++c) m.col_ptr_[c + 1] += m.col_ptr_[c];
    return m;
  }

  static SparseMatrixT identity(int n) {
    SparseMatrixT m;
    m.nrows_ = m.ncols_ = n;
    m.col_ptr_.resize(n + 1);
    m.row_idx_.resize(n);
    m.values_.assign(n, T(1));
    for (int i = 0; i <= n; ++i) m.col_ptr_[i] = i;
    for (int i = 0; i < n; ++i) m.row_idx_[i] = i;
    return m;
  }

  static SparseMatrixT zero(int nrows, int ncols, Symmetry sym = Symmetry::General) {
    SparseMatrixT m;
    m.nrows_ = nrows;
    m.ncols_ = ncols;
    m.symmetry_ = sym;
    m.col_ptr_.assign(ncols + 1, 0);
    return m;
  }

  int rows() const { return nrows_; }
  int cols() const { return ncols_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(row_idx_.size()); }
  Symmetry symmetry() const { return symmetry_; }

  int col_begin(int c) const { return col_ptr_[c]; }
  int col_end(int c) const { return col_ptr_[c + 1]; }
  int row_index(int p) const { return row_idx_[p]; }
  T value(int p) const { return values_[p]; }
  T& value_ref(int p) { return values_[p]; }

  const std::vector<int>& col_ptr() const { return col_ptr_; }
  const std::vector<int>& row_indices() const { return row_idx_; }
  const std::vector<T>& values() const { return values_; }

  // M[i][j] by binary search; honors the symmetric mirror.
  T coeff(int i, int j) const {
    if (symmetry_ == Symmetry::SymmetricLower && i < j) std::swap(i, j);
    auto first = row_idx_.begin() + col_ptr_[j];
    auto last = row_idx_.begin() + col_ptr_[j + 1];
    auto it = std::lower_bound(first, last, i);
    if (it != last && *it == i) return values_[it - row_idx_.begin()];
    return T(0);
  }

  std::vector<T> multiply(std::span<const T> v) const {
    if (static_cast<int>(v.size()) != ncols_) throw std::invalid_argument("spmv: dimension mismatch");
    std::vector<T> out(nrows_, T(0));
    for (int c = 0; c < ncols_; ++c) {
      for (int p = col_ptr_[c]; p < col_ptr_[c + 1]; ++p) {
        out[row_idx_[p]] += values_[p] * v[c];
        if (symmetry_ == Symmetry::SymmetricLower && row_idx_[p] != c)
          out[c] += values_[p] * v[row_idx_[p]];
      }
    }
    return out;
  }

  std::vector<T> multiply_transpose(std::span<const T> v) const {
    if (symmetry_ == Symmetry::SymmetricLower) return multiply(v);
    if (static_cast<int>(v.size()) != nrows_) throw std::invalid_argument("spmv^T: dimension mismatch");
    std::vector<T> out(ncols_, T(0));
    for (int c = 0; c < ncols_; ++c) {
      T acc = T(0);
      for (int p = col_ptr_[c]; p < col_ptr_[c + 1]; ++p) acc += values_[p] * v[row_idx_[p]];
      out[c] = acc;
    }
    return out;
  }

  // General matrix from symmetric-lower storage with both triangles explicit.
  SparseMatrixT expand_symmetric() const {
    if (symmetry_ != Symmetry::SymmetricLower) return *this;
    std::vector<TripletT<T>> trips;
    trips.reserve(2 * row_idx_.size());
    for (int c = 0; c < ncols_; ++c)
      for (int p = col_ptr_[c]; p < col_ptr_[c + 1]; ++p) {
        trips.push_back({row_idx_[p], c, values_[p]});
        if (row_idx_[p] != c) trips.push_back({c, row_idx_[p], values_[p]});
      }
    return from_triplets(nrows_, ncols_, trips, Symmetry::General);
  }

  SparseMatrixT transpose() const {
    if (symmetry_ == Symmetry::SymmetricLower) return *this;
    std::vector<TripletT<T>> trips;
    trips.reserve(row_idx_.size());
    for (int c = 0; c < ncols_; ++c)
      for (int p = col_ptr_[c]; p < col_ptr_[c + 1]; ++p)
        trips.push_back({c, row_idx_[p], values_[p]});
    return from_triplets(ncols_, nrows_, trips, Symmetry::General);
  }

  // Columns of a general matrix restricted to `cols`, in the given order.
  SparseMatrixT select_columns(std::span<const int> cols) const {
    if (symmetry_ != Symmetry::General)
      throw std::invalid_argument("select_columns requires general storage");
    SparseMatrixT m;
    m.nrows_ = nrows_;
    m.ncols_ = static_cast<int>(cols.size());
    m.col_ptr_.assign(m.ncols_ + 1, 0);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      int c = cols[k];
      if (c < 0 || c >= ncols_) throw std::out_of_range("select_columns: bad index");
      for (int p = col_ptr_[c]; p < col_ptr_[c + 1]; ++p) {
        m.row_idx_.push_back(row_idx_[p]);
        m.values_.push_back(values_[p]);
      }
      m.col_ptr_[k + 1] = static_cast<int>(m.row_idx_.size());
    }
    return m;
  }

  // Principal/rectangular block of a symmetric matrix: rows from `rows`,
  // columns from `cols` (index lists over the full matrix).
  SparseMatrixT submatrix(std::span<const int> rows, std::span<const int> cols) const {
    SparseMatrixT full = expand_symmetric();
    std::vector<int> row_map(nrows_, -1);
    for (std::size_t k = 0; k < rows.size(); ++k) row_map[rows[k]] = static_cast<int>(k);
    std::vector<TripletT<T>> trips;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      int c = cols[k];
      for (int p = full.col_ptr_[c]; p < full.col_ptr_[c + 1]; ++p) {
        int r = row_map[full.row_idx_[p]];
        if (r >= 0) trips.push_back({r, static_cast<int>(k), full.values_[p]});
      }
    }
    return from_triplets(static_cast<int>(rows.size()), static_cast<int>(cols.size()), trips,
                         Symmetry::General);
  }

  std::vector<T> diagonal() const {
    int n = std::min(nrows_, ncols_);
    std::vector<T> d(n, T(0));
    for (int c = 0; c < n; ++c)
      for (int p = col_ptr_[c]; p < col_ptr_[c + 1]; ++p)
        if (row_idx_[p] == c) d[c] = values_[p];
    return d;
  }

  template <typename U>
  SparseMatrixT<U> cast() const {
    SparseMatrixT<U> m;
    m.nrows_ = nrows_;
    m.ncols_ = ncols_;
    m.symmetry_ = symmetry_;
    m.col_ptr_ = col_ptr_;
    m.row_idx_ = row_idx_;
    m.values_.resize(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) m.values_[i] = static_cast<U>(values_[i]);
    return m;
  }

  template <typename U>
  friend class SparseMatrixT;

 private:
  int nrows_, ncols_;
  std::vector<int> col_ptr_;
  std::vector<int> row_idx_;
  std::vector<T> values_;
  Symmetry symmetry_ = Symmetry::General;
};

using SparseMatrix = SparseMatrixT<double>;
using SparseMatrixQ = SparseMatrixT<quad>;

// Disjoint column split; indicesN ∪ indicesB = {0..n-1}, both ascending.
struct ColumnPartition {
  std::vector<int> indicesN;
  std::vector<int> indicesB;
};

// sum_{j in cols} scale_j * a_j a_j^T, stored symmetric-lower. Passing no
// column list means all columns; passing no scale means unit weights.
template <typename T>
SparseMatrixT<T> aat_product(const SparseMatrixT<T>& A, const std::vector<T>* col_scale,
                             const std::vector<int>* cols) {
  std::vector<int> all;
  if (!cols) {
    all.resize(A.cols());
    for (int i = 0; i < A.cols(); ++i) all[i] = i;
    cols = &all;
  }
  if (col_scale && col_scale->size() != cols->size())
    throw std::invalid_argument("aat_product: scale length mismatch");
  std::vector<TripletT<T>> trips;
  for (std::size_t k = 0; k < cols->size(); ++k) {
    int j = (*cols)[k];
    if (j < 0 || j >= A.cols()) throw std::out_of_range("aat_product: bad column");
    T theta = col_scale ? (*col_scale)[k] : T(1);
    for (int p = A.col_begin(j); p < A.col_end(j); ++p)
      for (int q = A.col_begin(j); q <= p; ++q)
        trips.push_back({A.row_index(p), A.row_index(q), theta * A.value(p) * A.value(q)});
  }
  return SparseMatrixT<T>::from_triplets(A.rows(), A.rows(), trips, Symmetry::SymmetricLower);
}

// Max row sum of absolute values, counting the mirrored upper triangle.
template <typename T>
T inf_norm_sym(const SparseMatrixT<T>& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("inf_norm_sym: matrix not square");
  std::vector<T> row_sum(M.rows(), T(0));
  for (int c = 0; c < M.cols(); ++c)
    for (int p = M.col_begin(c); p < M.col_end(c); ++p) {
      row_sum[M.row_index(p)] += scalar_abs(M.value(p));
      if (M.symmetry() == Symmetry::SymmetricLower && M.row_index(p) != c)
        row_sum[c] += scalar_abs(M.value(p));
    }
  T best = T(0);
  for (T s : row_sum) best = std::max(best, s);
  return best;
}

// Infinity norm of a general (rectangular) matrix.
template <typename T>
T inf_norm(const SparseMatrixT<T>& M) {
  if (M.symmetry() == Symmetry::SymmetricLower) return inf_norm_sym(M);
  std::vector<T> row_sum(M.rows(), T(0));
  for (int c = 0; c < M.cols(); ++c)
    for (int p = M.col_begin(c); p < M.col_end(c); ++p)
      row_sum[M.row_index(p)] += scalar_abs(M.value(p));
  T best = T(0);
  for (T s : row_sum) best = std::max(best, s);
  return best;
}

// Power-iteration estimate of sigma_max(A). Used only for the epsilon floor,
// never as an exact quantity.
double two_norm_estimate(const SparseMatrix& A, int iters = 100, double tol = 1e-9);

SparseMatrix permute_symmetric(const SparseMatrix& M, std::span<const int> perm);

// PMP^T over any scalar; perm maps new index -> old index.
template <typename T>
SparseMatrixT<T> permute_symmetric_t(const SparseMatrixT<T>& M, std::span<const int> perm) {
  if (M.rows() != M.cols() || M.symmetry() != Symmetry::SymmetricLower)
    throw std::invalid_argument("permute_symmetric: need symmetric-lower square matrix");
  int n = M.rows();
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("permute_symmetric: bad permutation size");
  std::vector<int> inv(n, -1);
  for (int i = 0; i < n; ++i) {
    if (perm[i] < 0 || perm[i] >= n || inv[perm[i]] != -1)
      throw std::invalid_argument("permute_symmetric: not a permutation");
    inv[perm[i]] = i;
  }
  std::vector<TripletT<T>> trips;
  for (int c = 0; c < n; ++c)
    for (int p = M.col_begin(c); p < M.col_end(c); ++p) {
      int i = inv[M.row_index(p)], j = inv[c];
      if (i < j) std::swap(i, j);
      trips.push_back({i, j, M.value(p)});
    }
  return SparseMatrixT<T>::from_triplets(n, n, trips, Symmetry::SymmetricLower);
}

}  // namespace regipm
