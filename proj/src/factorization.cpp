#include "regipm/factorization.hpp"

#include <algorithm>
#include <numeric>

namespace regipm {
namespace detail {

namespace {

// Permuted upper triangle in CSC: column k holds entries with row <= k of
// P M P^T. Input must be symmetric-lower.
template <typename T>
SparseMatrixT<T> permuted_upper(const SparseMatrixT<T>& M, std::span<const int> perm) {
  const int n = M.rows();
  std::vector<int> inv(n);
  for (int i = 0; i < n; ++i) inv[perm[i]] = i;
  std::vector<TripletT<T>> trips;
  trips.reserve(M.nnz());
  for (int c = 0; c < n; ++c)
    for (int p = M.col_begin(c); p < M.col_end(c); ++p) {
      int i = inv[M.row_index(p)], j = inv[c];
      if (i > j) std::swap(i, j);
      trips.push_back({i, j, M.value(p)});
    }
  return SparseMatrixT<T>::from_triplets(n, n, trips, Symmetry::General);
}

}  // namespace

template <typename T>
bool ldl_factor(const SparseMatrixT<T>& M, std::span<const int> perm,
                const std::vector<PivotSign>* signs, LdlCore<T>& out,
                FactorizationFailure& failure) {
  if (M.rows() != M.cols() || M.symmetry() != Symmetry::SymmetricLower)
    throw std::invalid_argument("ldl_factor: need symmetric-lower square matrix");
  const int n = M.rows();
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("ldl_factor: bad perm");
  const SparseMatrixT<T> U = permuted_upper(M, perm);

  // Elimination tree and column counts of L.
  std::vector<int> parent(n, -1), flag(n, -1), lnz(n, 0);
  for (int k = 0; k < n; ++k) {
    flag[k] = k;
    for (int p = U.col_begin(k); p < U.col_end(k); ++p) {
      int i = U.row_index(p);
      while (i < k && flag[i] != k) {
        if (parent[i] == -1) parent[i] = k;
        ++lnz[i];
        flag[i] = k;
        i = parent[i];
      }
    }
  }

  out.n = n;
  out.perm.assign(perm.begin(), perm.end());
  out.col_ptr.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) out.col_ptr[i + 1] = out.col_ptr[i] + lnz[i];
  out.row_idx.assign(out.col_ptr[n], 0);
  out.values.assign(out.col_ptr[n], T(0));
  out.diag.assign(n, T(0));

  const T norm = inf_norm_sym(M);
  const T ldl_floor = T(ldl_pivot_rel_tol<T>()) * norm;

  std::vector<int> next(n, 0), pattern(n), stack(n);
  std::vector<T> y(n, T(0));
  std::fill(flag.begin(), flag.end(), -1);
  for (int k = 0; k < n; ++k) {
    int top = n;
    flag[k] = k;
    T d = T(0);
    for (int p = U.col_begin(k); p < U.col_end(k); ++p) {
      int i = U.row_index(p);
      if (i == k) {
        d += U.value(p);
        continue;
      }
      y[i] += U.value(p);
      int len = 0;
      while (flag[i] != k) {
        pattern[len++] = i;
        flag[i] = k;
        i = parent[i];
      }
      while (len > 0) stack[--top] = pattern[--len];
    }
    for (int s = top; s < n; ++s) {
      const int i = stack[s];
      const T yi = y[i];
      y[i] = T(0);
      const T lki = yi / out.diag[i];
      for (int p = out.col_ptr[i]; p < out.col_ptr[i] + next[i]; ++p)
        y[out.row_idx[p]] -= out.values[p] * yi;
      d -= lki * yi;
      const int slot = out.col_ptr[i] + next[i]++;
      out.row_idx[slot] = k;
      out.values[slot] = lki;
    }
    if (signs == nullptr) {
      if (!(d > T(kCholeskyPivotFloor))) {
        failure = {k, to_double(d), "nonpositive pivot in Cholesky"};
        return false;
      }
    } else {
      const PivotSign expected = (*signs)[perm[k]];
      if (scalar_abs(d) < ldl_floor || d == T(0)) {
        failure = {k, to_double(d), "pivot below quasi-definite tolerance"};
        return false;
      }
      if ((expected == PivotSign::Positive) != (d > T(0))) {
        failure = {k, to_double(d), "pivot sign flip in quasi-definite factorization"};
        return false;
      }
    }
    out.diag[k] = d;
  }
  return true;
}

template bool ldl_factor<double>(const SparseMatrixT<double>&, std::span<const int>,
                                 const std::vector<PivotSign>*, LdlCore<double>&,
                                 FactorizationFailure&);
template bool ldl_factor<quad>(const SparseMatrixT<quad>&, std::span<const int>,
                               const std::vector<PivotSign>*, LdlCore<quad>&,
                               FactorizationFailure&);

namespace {

// Materialize L from a core: unit diagonal replaced by sqrt(D) scaling for
// the Cholesky view, or kept at one for the LDL^T view.
SparseMatrix build_lower(const detail::LdlCore<double>& core, bool scale_by_sqrt_d) {
  std::vector<Triplet> trips;
  trips.reserve(core.values.size() + core.n);
  for (int j = 0; j < core.n; ++j) {
    double djs = scale_by_sqrt_d ? std::sqrt(core.diag[j]) : 1.0;
    trips.push_back({j, j, djs});
    for (int p = core.col_ptr[j]; p < core.col_ptr[j + 1]; ++p)
      trips.push_back({core.row_idx[p], j, core.values[p] * djs});
  }
  // L is genuinely lower triangular; stored as general CSC for direct access.
  return SparseMatrix::from_triplets(core.n, core.n, trips, Symmetry::General);
}

std::vector<double> refined_solve(const detail::LdlCore<double>& core, const SparseMatrix& M,
                                  std::span<const double> rhs) {
  std::vector<double> x = core.solve(rhs);
  std::vector<double> mx = M.multiply(x);
  std::vector<double> r(rhs.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - mx[i];
  std::vector<double> dx = core.solve(r);
  for (std::size_t i = 0; i < r.size(); ++i) x[i] += dx[i];
  return x;
}

}  // namespace

}  // namespace detail

CholeskyFactor::CholeskyFactor(detail::LdlCore<double> core)
    : core_(std::move(core)), L_(detail::build_lower(core_, true)) {}

std::vector<double> CholeskyFactor::solve(std::span<const double> rhs) const {
  return core_.solve(rhs);
}

std::vector<double> CholeskyFactor::solve_refined(const SparseMatrix& M,
                                                  std::span<const double> rhs) const {
  return detail::refined_solve(core_, M, rhs);
}

LdlFactor::LdlFactor(detail::LdlCore<double> core)
    : core_(std::move(core)), L_(detail::build_lower(core_, false)) {}

std::vector<double> LdlFactor::solve(std::span<const double> rhs) const {
  return core_.solve(rhs);
}

std::vector<double> LdlFactor::solve_refined(const SparseMatrix& M,
                                             std::span<const double> rhs) const {
  return detail::refined_solve(core_, M, rhs);
}

std::pair<int, int> LdlFactor::inertia() const {
  int neg = 0, pos = 0;
  for (double d : core_.diag) (d < 0 ? neg : pos)++;
  return {neg, pos};
}

CholeskyOutcome cholesky(const SparseMatrix& M, const std::vector<int>* perm) {
  std::vector<int> id;
  if (!perm) {
    id.resize(M.rows());
    std::iota(id.begin(), id.end(), 0);
    perm = &id;
  }
  detail::LdlCore<double> core;
  CholeskyOutcome out;
  if (detail::ldl_factor<double>(M, *perm, nullptr, core, out.failure))
    out.factor.emplace(std::move(core));
  return out;
}

LdlOutcome ldlt_quasidefinite(const SparseMatrix& M, const std::vector<PivotSign>& sign_pattern,
                              const std::vector<int>* perm) {
  if (static_cast<int>(sign_pattern.size()) != M.rows())
    throw std::invalid_argument("ldlt_quasidefinite: sign pattern size mismatch");
  std::vector<int> id;
  if (!perm) {
    id.resize(M.rows());
    std::iota(id.begin(), id.end(), 0);
    perm = &id;
  }
  detail::LdlCore<double> core;
  LdlOutcome out;
  if (detail::ldl_factor<double>(M, *perm, &sign_pattern, core, out.failure))
    out.factor.emplace(std::move(core));
  return out;
}

}  // namespace regipm
