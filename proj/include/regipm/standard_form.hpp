#pragma once

#include <span>
#include <string>
#include <vector>

#include "regipm/mps.hpp"
#include "regipm/sparse.hpp"

namespace regipm {

// Box placed around an originally-free variable. The box starts at +/-100 and
// doubles whenever the iterate crowds either end; the bound row keeps
// x_shifted + slack = upper - lower.
struct FreeBox {
  int column = -1;
  double lower = -100.0;
  double upper = 100.0;
  int slack_column = -1;
  int bound_row = -1;
};

// min c^T x + 0.5 x^T Q x + constant  s.t.  A x = b, x >= 0.
// Original variables sit at standard indices [0, num_original_columns);
// x_original_j = sign_j * x_std_j + shift_j.
struct StandardQP {
  std::string name;
  SparseMatrix A;                 // m x n, general
  SparseMatrix Q;                 // n x n symmetric-lower; nnz() == 0 means LP
  std::vector<double> c;
  std::vector<double> b;
  double constant = 0.0;
  std::vector<FreeBox> free_boxes;

  int num_original_columns = 0;
  std::vector<double> shift;      // per standard column
  std::vector<double> sign;       // +1 or -1 per standard column

  int rows() const { return A.rows(); }
  int cols() const { return A.cols(); }
  bool is_lp() const { return Q.nnz() == 0; }

  double objective_value(std::span<const double> x_std) const;
  std::vector<double> original_solution(std::span<const double> x_std) const;

  // Internals kept for box expansion: b/c/constant are derived from these
  // plus the current shifts.
  std::vector<double> b_base;
  std::vector<double> c_base;
  double base_constant = 0.0;
  void rebuild_derived();
};

// Shift-and-slack conversion. Inequalities get slack columns, ranged rows
// bounded slacks, finite lower bounds shift, (-inf, u] columns reflect, and
// free variables are boxed per FreeBox. check_psd enables a dense Cholesky
// check of Q (plus a tiny ridge) for n <= 400.
StandardQP to_standard_form(const MpsModel& model, bool check_psd = false);

// Doubles any box whose variable sits within 1% of either end. Returns true
// when something changed; b and the objective caches are rebuilt, so primal
// residuals must be recomputed by the caller.
bool expand_free_boxes(StandardQP& problem, std::span<const double> x_std);

}  // namespace regipm
