#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "regipm/factorization.hpp"
#include "regipm/regularizer.hpp"
#include "regipm/standard_form.hpp"

namespace regipm {

// w_k = (x, r, s, y, z); x and z stay strictly positive throughout.
struct IterateState {
  std::vector<double> x, y, z, r, s;
  double mu = 0.0;
  int k = 0;
  double prev_step_x = 1.0, prev_step_z = 1.0;
};

struct Residuals {
  std::vector<double> primal;  // b - Ax
  std::vector<double> dual;    // c - A^T y - z + Qx
  double mu = 0.0;
  double primal_rel = 0.0;     // ||primal|| / (||b|| + 1)
  double dual_rel = 0.0;       // ||dual|| / (||c|| + 1)
};

struct Direction {
  std::vector<double> dx, dy, dz, dr, ds;
};

enum class SolveStatus { Optimal, IterationLimit, FactorizationStalled };

struct IterationRecord {
  int k = 0;
  int size_n = 0;
  double reg_thr = 0.0;
  double delta_d = 0.0;
  double fact_seconds = 0.0;
  std::int64_t nnz_system = 0;
  std::int64_t nnz_factor = 0;
  double step_x = 0.0, step_z = 0.0;
  double sigma = 0.0;
  double mu = 0.0;
  int safeguard_retries = 0;
};

// Everything a per-iteration verifier needs; pointers are valid only during
// the observer call.
struct IterationSnapshot {
  int k = 0;
  bool qp_path = false;
  RegMode mode_used = RegMode::Uniform;
  double sigma = 0.0, mu = 0.0;
  double reg_thr = 0.0;
  double delta_d = 0.0, delta_pN = 0.0, delta_pB = 0.0;
  double step_x = 0.0, step_z = 0.0;
  const StandardQP* problem = nullptr;
  const IterateState* state = nullptr;  // the iterate the direction was computed at
  const std::vector<double>* theta = nullptr;
  const ColumnPartition* partition = nullptr;
  const std::vector<double>* qbar_diag = nullptr;  // empty unless QP non-diagonal
  const Direction* direction = nullptr;
  std::int64_t nnz_system = 0, nnz_factor = 0;
  double fact_seconds = 0.0;
  std::pair<int, int> ldl_inertia{0, 0};  // (neg, pos) pivots on the QP path
};
using IterationObserver = std::function<void(const IterationSnapshot&)>;

struct SolveOptions {
  RegMode mode = RegMode::NonDiagonal;
  double tol = 0.0;  // 0 picks the default: 1e-6 for LP, 1e-8 for QP
  int maxit = 200;
  bool force_qp_path = false;  // push an LP through the quadratic path
  IterationObserver observer;
};

struct SolveReport {
  SolveStatus status = SolveStatus::IterationLimit;
  int iterations = 0;
  double objective = 0.0;
  double primal_residual = 0.0, dual_residual = 0.0, mu = 0.0;
  double total_seconds = 0.0;
  std::vector<IterationRecord> history;
  IterateState final_state;
};

// Relaxed least-squares point with positivity shifts; r = s = 0.
IterateState initial_point(const StandardQP& problem);

Residuals compute_residuals(const StandardQP& problem, const IterateState& state);

// sigma = clamp(max((1-a_x)^5, (1-a_z)^5), 0.05, 0.95).
double centring_sigma(double prev_step_x, double prev_step_z);

// Fraction-to-the-boundary steps with tau = 0.995.
std::pair<double, double> step_lengths(const IterateState& state, const Direction& dir);

// One Newton direction at the given iterate. `mode` is the mode actually in
// force (the caller resolves the empty-N uniform fallback first).
struct StepOutcome {
  std::optional<Direction> direction;
  FactorizationFailure failure;
  double delta_d = 0.0, delta_pN = 0.0, delta_pB = 0.0;
  std::vector<double> qbar_diag;
  std::int64_t nnz_system = 0, nnz_factor = 0;
  std::pair<int, int> inertia{0, 0};
  bool ok() const { return direction.has_value(); }
};

StepOutcome newton_step_lp(const StandardQP& problem, const IterateState& state, RegMode mode,
                           const ColumnPartition& part, double reg_thr, double sigma,
                           const std::vector<int>* ordering = nullptr);

StepOutcome newton_step_qp(const StandardQP& problem, const IterateState& state, RegMode mode,
                           const ColumnPartition& part, double reg_thr, double sigma,
                           const std::vector<int>* ordering = nullptr);

SolveReport solve(StandardQP& problem, const SolveOptions& opts = {});

}  // namespace regipm
