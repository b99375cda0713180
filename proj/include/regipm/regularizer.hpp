#pragma once

#include <optional>
#include <span>
#include <vector>

#include "regipm/sparse.hpp"

namespace regipm {

// reg_thr starts at 1, decays at the rate of mu, and never drops below
// epsilon = max(0.1 * tol / ||A||^2, 1e-13).
struct RegSchedule {
  double reg_thr = 1.0;
  double epsilon = 1e-13;
  int iteration = 0;
};

RegSchedule make_schedule(double tol, double norm_a_two);
void update_schedule(RegSchedule& sched, double mu_prev, double mu_new);

enum class RegMode { NonDiagonal, Uniform, None };

struct RegPlan {
  RegMode mode = RegMode::Uniform;
  ColumnPartition partition;
  double delta_d = 0.0;   // uniform dual diagonal
  double delta_pN = 0.0;  // ||Q_N||_inf (QP)
  double delta_pB = 0.0;  // QP primal diagonal on the B block
  std::vector<double> qbar_diag;  // diagonal of Qbar_N (QP), one entry per N column
};

// Theta entries are clamped to [1e-30, 1e30] before any use.
void clamp_theta(std::span<double> theta);

// Column j enters N when theta_j * ||AA^T||_inf <= reg_thr and, for QP,
// theta_j * ||QQ^T||_inf <= reg_thr as well.
ColumnPartition partition_columns(std::span<const double> theta, double reg_thr,
                                  double norm_aat, std::optional<double> norm_qqt);

RegPlan uniform_plan(const RegSchedule& sched, bool is_qp);

// LP path: A_B Theta_B A_B^T + diag(A_N Theta_N A_N^T) + delta_d I.
// The off-diagonal part of the N block never enters the matrix; adding the
// implicit R_d is exactly this drop.
template <typename T>
struct LpNormalSystem {
  SparseMatrixT<T> matrix;  // m x m, symmetric-lower, SPD
  T delta_d = T(0);
};

template <typename T>
LpNormalSystem<T> build_lp_normal_matrix(const SparseMatrixT<T>& A, std::span<const T> theta,
                                         const ColumnPartition& part, double reg_thr) {
  const int m = A.rows();
  const auto& N = part.indicesN;
  const auto& B = part.indicesB;
  if (N.empty()) throw std::invalid_argument("build_lp_normal_matrix: empty N (uniform fallback)");

  const SparseMatrixT<T> A_N = A.select_columns(N);
  T theta_max = T(0);
  for (int j : N) theta_max = std::max(theta_max, theta[j]);
  const T delta_d = theta_max * inf_norm_sym(aat_product<T>(A_N, nullptr, nullptr));
  (void)reg_thr;

  std::vector<T> theta_b(B.size());
  for (std::size_t k = 0; k < B.size(); ++k) theta_b[k] = theta[B[k]];
  const SparseMatrixT<T> A_B = A.select_columns(B);
  SparseMatrixT<T> bb = aat_product<T>(A_B, &theta_b, nullptr);

  // diag(A_N Theta_N A_N^T): direct accumulation, the off part is absorbed.
  std::vector<T> ndiag(m, T(0));
  for (std::size_t k = 0; k < N.size(); ++k) {
    const T th = theta[N[k]];
    for (int p = A_N.col_begin(static_cast<int>(k)); p < A_N.col_end(static_cast<int>(k)); ++p)
      ndiag[A_N.row_index(p)] += th * A_N.value(p) * A_N.value(p);
  }

  std::vector<TripletT<T>> trips;
  trips.reserve(bb.nnz() + m);
  for (int c = 0; c < m; ++c)
    for (int p = bb.col_begin(c); p < bb.col_end(c); ++p)
      trips.push_back({bb.row_index(p), c, bb.value(p)});
  for (int i = 0; i < m; ++i) trips.push_back({i, i, ndiag[i] + delta_d});

  LpNormalSystem<T> out;
  out.matrix = SparseMatrixT<T>::from_triplets(m, m, trips, Symmetry::SymmetricLower);
  out.delta_d = delta_d;
  return out;
}

// QP path: the partially reduced system after pivoting the N block out, with
// R_pN, R_pB and R_d substituted so that only diagonals survive where the
// absorption applies. Block order: [Delta x_B; Delta y].
template <typename T>
struct QpReducedSystem {
  SparseMatrixT<T> matrix;  // (n2+m) x (n2+m), symmetric-lower, quasi-definite
  std::vector<T> qbar_diag;
  T delta_d = T(0);
  T delta_pN = T(0);
  T delta_pB = T(0);
  SparseMatrixT<T> A_N, A_B, Q_BN;  // blocks reused for rhs assembly and recovery
};

template <typename T>
QpReducedSystem<T> build_qp_reduced_system(const SparseMatrixT<T>& A, const SparseMatrixT<T>& Q,
                                           std::span<const T> theta, const ColumnPartition& part,
                                           double reg_thr) {
  const int m = A.rows();
  const auto& N = part.indicesN;
  const auto& B = part.indicesB;
  if (N.empty()) throw std::invalid_argument("build_qp_reduced_system: empty N (uniform fallback)");
  const int n2 = static_cast<int>(B.size());
  (void)reg_thr;

  QpReducedSystem<T> out;
  out.A_N = A.select_columns(N);
  out.A_B = A.select_columns(B);
  const SparseMatrixT<T> Q_N = Q.submatrix(N, N);
  out.Q_BN = Q.submatrix(B, N);
  const SparseMatrixT<T> Q_B = Q.submatrix(B, B);

  out.delta_pN = inf_norm(Q_N);
  out.qbar_diag.resize(N.size());
  const auto qn_diag = Q_N.diagonal();
  T inv_qbar_max = T(0);
  for (std::size_t k = 0; k < N.size(); ++k) {
    out.qbar_diag[k] = T(1) / theta[N[k]] + qn_diag[k] + out.delta_pN;
    inv_qbar_max = std::max(inv_qbar_max, T(1) / out.qbar_diag[k]);
  }
  out.delta_pB = inv_qbar_max * inf_norm_sym(aat_product<T>(out.Q_BN, nullptr, nullptr));
  out.delta_d = inv_qbar_max * inf_norm_sym(aat_product<T>(out.A_N, nullptr, nullptr));

  // diag(Q_BN Qbar^-1 Q_BN^T) and diag(A_N Qbar^-1 A_N^T).
  std::vector<T> schur_b(n2, T(0)), schur_y(m, T(0));
  for (std::size_t k = 0; k < N.size(); ++k) {
    const int kk = static_cast<int>(k);
    const T w = T(1) / out.qbar_diag[k];
    for (int p = out.Q_BN.col_begin(kk); p < out.Q_BN.col_end(kk); ++p)
      schur_b[out.Q_BN.row_index(p)] += w * out.Q_BN.value(p) * out.Q_BN.value(p);
    for (int p = out.A_N.col_begin(kk); p < out.A_N.col_end(kk); ++p)
      schur_y[out.A_N.row_index(p)] += w * out.A_N.value(p) * out.A_N.value(p);
  }

  std::vector<TripletT<T>> trips;
  // (1,1): -(Q_B + Theta_B^-1 + delta_pB I - diag(Q_BN Qbar^-1 Q_BN^T)).
  for (int c = 0; c < n2; ++c)
    for (int p = Q_B.col_begin(c); p < Q_B.col_end(c); ++p)
      if (Q_B.row_index(p) >= c) trips.push_back({Q_B.row_index(p), c, -Q_B.value(p)});
  for (int i = 0; i < n2; ++i)
    trips.push_back({i, i, -(T(1) / theta[B[i]] + out.delta_pB - schur_b[i])});
  // (2,1): A_B - A_N Qbar^-1 Q_BN^T.
  for (int c = 0; c < n2; ++c)
    for (int p = out.A_B.col_begin(c); p < out.A_B.col_end(c); ++p)
      trips.push_back({n2 + out.A_B.row_index(p), c, out.A_B.value(p)});
  for (std::size_t k = 0; k < N.size(); ++k) {
    const int kk = static_cast<int>(k);
    const T w = T(1) / out.qbar_diag[k];
    for (int pq = out.Q_BN.col_begin(kk); pq < out.Q_BN.col_end(kk); ++pq) {
      const int bcol = out.Q_BN.row_index(pq);
      const T qv = out.Q_BN.value(pq) * w;
      for (int pa = out.A_N.col_begin(kk); pa < out.A_N.col_end(kk); ++pa)
        trips.push_back({n2 + out.A_N.row_index(pa), bcol, -qv * out.A_N.value(pa)});
    }
  }
  // (2,2): diag(A_N Qbar^-1 A_N^T) + delta_d I.
  for (int i = 0; i < m; ++i) trips.push_back({n2 + i, n2 + i, schur_y[i] + out.delta_d});

  out.matrix = SparseMatrixT<T>::from_triplets(n2 + m, n2 + m, trips, Symmetry::SymmetricLower);
  return out;
}

}  // namespace regipm
