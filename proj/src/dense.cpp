#include "regipm/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace regipm {
namespace {

// Cyclic Jacobi sweeps over the strict upper triangle until the off-diagonal
// Frobenius mass is negligible. `vecs` may be null.
template <typename T>
void jacobi_kernel(std::vector<T>& a, int n, std::vector<T>* vecs) {
  if (vecs) {
    vecs->assign(static_cast<std::size_t>(n) * n, T(0));
    for (int i = 0; i < n; ++i) (*vecs)[static_cast<std::size_t>(i) * n + i] = T(1);
  }
  auto at = [&](int i, int j) -> T& { return a[static_cast<std::size_t>(i) * n + j]; };
  T norm = T(0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) norm += at(i, j) * at(i, j);
  norm = scalar_sqrt(norm);
  if (norm == T(0)) return;
  const T eps = std::numeric_limits<T>::epsilon();
  const T stop = norm * eps * T(n);
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    T off = T(0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (scalar_sqrt(off) <= stop) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        T apq = at(p, q);
        if (scalar_abs(apq) <= eps * norm * T(1e-3)) continue;
        T app = at(p, p), aqq = at(q, q);
        T tau = (aqq - app) / (T(2) * apq);
        T t = (tau >= T(0)) ? T(1) / (tau + scalar_sqrt(T(1) + tau * tau))
                            : T(1) / (tau - scalar_sqrt(T(1) + tau * tau));
        T c = T(1) / scalar_sqrt(T(1) + t * t);
        T s = t * c;
        for (int k = 0; k < n; ++k) {
          T akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          T apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        if (vecs) {
          for (int k = 0; k < n; ++k) {
            T vkp = (*vecs)[static_cast<std::size_t>(k) * n + p];
            T vkq = (*vecs)[static_cast<std::size_t>(k) * n + q];
            (*vecs)[static_cast<std::size_t>(k) * n + p] = c * vkp - s * vkq;
            (*vecs)[static_cast<std::size_t>(k) * n + q] = s * vkp + c * vkq;
          }
        }
      }
    }
  }
}

template <typename T>
EigResult jacobi_eig(const DenseMatrix& M, bool want_vectors) {
  if (M.rows != M.cols) throw std::invalid_argument("dense_symmetric_eig: matrix not square");
  if (M.rows > kDenseEigDimensionCap)
    throw std::invalid_argument("dense_symmetric_eig: dimension exceeds desk-scale cap");
  int n = M.rows;
  std::vector<T> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a[static_cast<std::size_t>(i) * n + j] =
          T(0.5) * (T(M(i, j)) + T(M(j, i)));  // exact symmetry before rotating
  std::vector<T> vecs;
  jacobi_kernel<T>(a, n, want_vectors ? &vecs : nullptr);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return a[static_cast<std::size_t>(i) * n + i] < a[static_cast<std::size_t>(j) * n + j];
  });
  EigResult res;
  res.values.resize(n);
  for (int k = 0; k < n; ++k)
    res.values[k] = to_double(a[static_cast<std::size_t>(order[k]) * n + order[k]]);
  if (want_vectors) {
    res.vectors = DenseMatrix(n, n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        res.vectors(i, k) = to_double(vecs[static_cast<std::size_t>(i) * n + order[k]]);
  }
  return res;
}

}  // namespace

EigResult dense_symmetric_eig(const DenseMatrix& M) { return jacobi_eig<long double>(M, true); }

std::vector<double> dense_symmetric_eigenvalues(const DenseMatrix& M) {
  return jacobi_eig<long double>(M, false).values;
}

Inertia dense_inertia(const DenseMatrix& M) {
  if (M.rows != M.cols) throw std::invalid_argument("dense_inertia: matrix not square");
  int n = M.rows;
  std::vector<double> scale(n, 1.0);
  for (int i = 0; i < n; ++i) {
    double d = std::fabs(M(i, i));
    if (d == 0.0) {
      for (int j = 0; j < n; ++j) d = std::max(d, std::fabs(M(i, j)));
      if (d == 0.0) d = 1.0;
    }
    scale[i] = 1.0 / std::sqrt(d);
  }
  DenseMatrix S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) S(i, j) = scale[i] * M(i, j) * scale[j];
  std::vector<double> vals = dense_symmetric_eigenvalues(S);
  double bound = 0.0;
  for (double v : vals) bound = std::max(bound, std::fabs(v));
  double tiny = bound * 1e-14 * n;
  Inertia in;
  for (double v : vals) {
    if (v > tiny)
      ++in.pos;
    else if (v < -tiny)
      ++in.neg;
    else
      ++in.zero;
  }
  return in;
}

bool dense_cholesky(const DenseMatrix& M, DenseMatrix& L) {
  if (M.rows != M.cols) throw std::invalid_argument("dense_cholesky: matrix not square");
  int n = M.rows;
  L = DenseMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    long double d = M(j, j);
    for (int k = 0; k < j; ++k) d -= static_cast<long double>(L(j, k)) * L(j, k);
    if (d <= 0.0L) return false;
    L(j, j) = static_cast<double>(std::sqrt(d));
    for (int i = j + 1; i < n; ++i) {
      long double v = M(i, j);
      for (int k = 0; k < j; ++k) v -= static_cast<long double>(L(i, k)) * L(j, k);
      L(i, j) = static_cast<double>(v / L(j, j));
    }
  }
  return true;
}

std::vector<double> dense_solve_ldlt(const DenseMatrix& M, std::span<const double> b) {
  if (M.rows != M.cols || static_cast<int>(b.size()) != M.rows)
    throw std::invalid_argument("dense_solve_ldlt: dimension mismatch");
  int n = M.rows;
  DenseMatrix L = DenseMatrix::identity(n);
  std::vector<long double> d(n, 0.0L);
  for (int j = 0; j < n; ++j) {
    long double dj = M(j, j);
    for (int k = 0; k < j; ++k) dj -= static_cast<long double>(L(j, k)) * L(j, k) * d[k];
    if (dj == 0.0L) throw std::runtime_error("dense_solve_ldlt: zero pivot");
    d[j] = dj;
    for (int i = j + 1; i < n; ++i) {
      long double v = M(i, j);
      for (int k = 0; k < j; ++k) v -= static_cast<long double>(L(i, k)) * L(j, k) * d[k];
      L(i, j) = static_cast<double>(v / dj);
    }
  }
  std::vector<long double> y(b.begin(), b.end());
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < i; ++k) y[i] -= static_cast<long double>(L(i, k)) * y[k];
  for (int i = 0; i < n; ++i) y[i] /= d[i];
  for (int i = n - 1; i >= 0; --i)
    for (int k = i + 1; k < n; ++k) y[i] -= static_cast<long double>(L(k, i)) * y[k];
  return std::vector<double>(y.begin(), y.end());
}

SingularExtremes dense_singular_extremes(const DenseMatrix& A) {
  const bool wide = A.cols >= A.rows;
  const DenseMatrix& G = wide ? A.multiply(A.transpose()) : A.transpose().multiply(A);
  std::vector<double> vals = dense_symmetric_eigenvalues(G);
  SingularExtremes s;
  s.max = std::sqrt(std::max(0.0, vals.back()));
  s.min = std::sqrt(std::max(0.0, vals.front()));
  return s;
}

}  // namespace regipm
