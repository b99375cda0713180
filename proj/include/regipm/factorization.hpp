#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regipm/sparse.hpp"

namespace regipm {

struct FactorizationFailure {
  int column = -1;      // position in the permuted order
  double pivot = 0.0;
  std::string message;
};

enum class PivotSign : signed char { Negative = -1, Positive = 1 };

inline constexpr double kCholeskyPivotFloor = 1e-30;
inline constexpr double kLdlPivotRelTol = 1e-14;

namespace detail {
// The quasi-definite pivot floor scales with the working precision: 1e-14
// suits double; the wide-precision path resolves far smaller pivots that are
// legitimate when Theta spreads across many orders of magnitude.
template <typename T>
constexpr double ldl_pivot_rel_tol() {
  return kLdlPivotRelTol;
}
template <>
constexpr double ldl_pivot_rel_tol<quad>() {
  return 1e-28;
}
}  // namespace detail

namespace detail {

// Shared up-looking LDL^T core with a static ordering and 1x1 pivots only.
// Cholesky is the signs == nullptr mode (all pivots must clear the positive
// floor); quasi-definite mode checks each pivot against its expected sign.
template <typename T>
struct LdlCore {
  int n = 0;
  std::vector<int> perm;      // new -> old
  std::vector<int> col_ptr;   // strictly-lower L in CSC
  std::vector<int> row_idx;
  std::vector<T> values;
  std::vector<T> diag;

  std::int64_t nnz_factor() const {
    return static_cast<std::int64_t>(values.size()) + static_cast<std::int64_t>(diag.size());
  }

  std::vector<T> solve(std::span<const T> rhs) const {
    std::vector<T> y(n);
    for (int i = 0; i < n; ++i) y[i] = rhs[perm[i]];
    for (int j = 0; j < n; ++j) {
      T yj = y[j];
      if (yj != T(0))
        for (int p = col_ptr[j]; p < col_ptr[j + 1]; ++p) y[row_idx[p]] -= values[p] * yj;
    }
    for (int j = 0; j < n; ++j) y[j] /= diag[j];
    for (int j = n - 1; j >= 0; --j) {
      T acc = y[j];
      for (int p = col_ptr[j]; p < col_ptr[j + 1]; ++p) acc -= values[p] * y[row_idx[p]];
      y[j] = acc;
    }
    std::vector<T> x(n);
    for (int i = 0; i < n; ++i) x[perm[i]] = y[i];
    return x;
  }
};

template <typename T>
bool ldl_factor(const SparseMatrixT<T>& M, std::span<const int> perm,
                const std::vector<PivotSign>* signs, LdlCore<T>& out,
                FactorizationFailure& failure);

extern template bool ldl_factor<double>(const SparseMatrixT<double>&, std::span<const int>,
                                        const std::vector<PivotSign>*, LdlCore<double>&,
                                        FactorizationFailure&);
extern template bool ldl_factor<quad>(const SparseMatrixT<quad>&, std::span<const int>,
                                      const std::vector<PivotSign>*, LdlCore<quad>&,
                                      FactorizationFailure&);

}  // namespace detail

// P M P^T = L L^T with positive-diagonal lower-triangular L.
class CholeskyFactor {
 public:
  CholeskyFactor(detail::LdlCore<double> core);
  const SparseMatrix& L() const { return L_; }
  const std::vector<int>& permutation() const { return core_.perm; }
  std::int64_t nnz_factor() const { return core_.nnz_factor(); }
  std::vector<double> solve(std::span<const double> rhs) const;
  // One step of residual correction against the original matrix. Off by
  // default everywhere; the factorization itself is not refined.
  std::vector<double> solve_refined(const SparseMatrix& M, std::span<const double> rhs) const;

 private:
  detail::LdlCore<double> core_;
  SparseMatrix L_;
};

// P M P^T = L D L^T with unit lower-triangular L and signed diagonal D.
class LdlFactor {
 public:
  LdlFactor(detail::LdlCore<double> core);
  const SparseMatrix& L() const { return L_; }  // includes the unit diagonal
  const std::vector<double>& D() const { return core_.diag; }
  const std::vector<int>& permutation() const { return core_.perm; }
  std::int64_t nnz_factor() const { return core_.nnz_factor(); }
  std::vector<double> solve(std::span<const double> rhs) const;
  std::vector<double> solve_refined(const SparseMatrix& M, std::span<const double> rhs) const;
  std::pair<int, int> inertia() const;  // (negative, positive) pivot counts

 private:
  detail::LdlCore<double> core_;
  SparseMatrix L_;
};

struct CholeskyOutcome {
  std::optional<CholeskyFactor> factor;
  FactorizationFailure failure;
  bool ok() const { return factor.has_value(); }
};

struct LdlOutcome {
  std::optional<LdlFactor> factor;
  FactorizationFailure failure;
  bool ok() const { return factor.has_value(); }
};

// perm maps new index -> old index; identity when omitted.
CholeskyOutcome cholesky(const SparseMatrix& M, const std::vector<int>* perm = nullptr);
LdlOutcome ldlt_quasidefinite(const SparseMatrix& M, const std::vector<PivotSign>& sign_pattern,
                              const std::vector<int>* perm = nullptr);

}  // namespace regipm
