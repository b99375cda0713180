#include "regipm/standard_form.hpp"

#include <cmath>
#include <limits>

#include "regipm/dense.hpp"

namespace regipm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct WorkColumn {
  std::vector<std::pair<int, double>> entries;
  double lo = 0.0;
  double up = kInf;
  double cost = 0.0;
};

}  // namespace

double StandardQP::objective_value(std::span<const double> x_std) const {
  double lin = 0.0;
  for (int j = 0; j < cols(); ++j) lin += c[j] * x_std[j];
  double quad_term = 0.0;
  if (Q.nnz() > 0) {
    auto qx = Q.multiply(x_std);
    for (int j = 0; j < cols(); ++j) quad_term += 0.5 * x_std[j] * qx[j];
  }
  return lin + quad_term + constant;
}

std::vector<double> StandardQP::original_solution(std::span<const double> x_std) const {
  std::vector<double> out(num_original_columns);
  for (int j = 0; j < num_original_columns; ++j) out[j] = sign[j] * x_std[j] + shift[j];
  return out;
}

void StandardQP::rebuild_derived() {
  const int n = cols();
  // x_orig = S (x_std + w) with w = S * shift.
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = sign[j] * shift[j];
  std::vector<double> aw = A.multiply(w);
  b.resize(rows());
  for (int i = 0; i < rows(); ++i) b[i] = b_base[i] - aw[i];
  c.resize(n);
  double cst = 0.0;
  for (int j = 0; j < n; ++j) {
    c[j] = sign[j] * c_base[j];
    cst += c[j] * w[j];
  }
  if (Q.nnz() > 0) {
    auto qw = Q.multiply(w);
    for (int j = 0; j < n; ++j) {
      c[j] += qw[j];
      cst += 0.5 * w[j] * qw[j];
    }
  }
  constant = base_constant + cst;
}

StandardQP to_standard_form(const MpsModel& model, bool check_psd) {
  const int m0 = model.num_rows();
  const int n0 = model.num_cols();

  // Row activity bounds, with RANGES folded in.
  std::vector<double> row_lo(m0), row_up(m0);
  for (int i = 0; i < m0; ++i) {
    double rhs = model.rhs[i];
    switch (model.row_kinds[i]) {
      case RowKind::Equal:
        row_lo[i] = row_up[i] = rhs;
        break;
      case RowKind::LessEqual:
        row_lo[i] = -kInf;
        row_up[i] = rhs;
        break;
      case RowKind::GreaterEqual:
        row_lo[i] = rhs;
        row_up[i] = kInf;
        break;
    }
    double r = model.range[i];
    if (!std::isnan(r)) {
      switch (model.row_kinds[i]) {
        case RowKind::Equal:
          if (r >= 0)
            row_up[i] = rhs + r;
          else
            row_lo[i] = rhs + r;
          break;
        case RowKind::LessEqual:
          row_lo[i] = row_up[i] - std::fabs(r);
          break;
        case RowKind::GreaterEqual:
          row_up[i] = row_lo[i] + std::fabs(r);
          break;
      }
    }
  }

  std::vector<WorkColumn> cols(n0);
  for (int j = 0; j < n0; ++j) {
    cols[j].lo = model.lower[j];
    cols[j].up = model.upper[j];
    cols[j].cost = model.objective[j];
    if (cols[j].lo > cols[j].up)
      throw std::invalid_argument("infeasible bounds on column " + model.col_names[j]);
  }
  for (const auto& t : model.entries) cols[t.col].entries.push_back({t.row, t.value});

  // Equality conversion: slack per inequality/ranged row.
  std::vector<double> b_base(m0);
  for (int i = 0; i < m0; ++i) {
    if (row_lo[i] > row_up[i])
      throw std::invalid_argument("infeasible range on row " + model.row_names[i]);
    if (row_lo[i] == row_up[i]) {
      b_base[i] = row_lo[i];
      continue;
    }
    WorkColumn slack;
    if (row_up[i] < kInf) {
      slack.entries.push_back({i, 1.0});
      slack.up = (row_lo[i] > -kInf) ? row_up[i] - row_lo[i] : kInf;
      b_base[i] = row_up[i];
    } else {
      slack.entries.push_back({i, -1.0});
      b_base[i] = row_lo[i];
    }
    cols.push_back(std::move(slack));
  }

  // Shift / reflect / box every column so plain x >= 0 remains.
  StandardQP p;
  p.name = model.name;
  p.num_original_columns = n0;
  int next_row = m0;
  const std::size_t fixed_cols = cols.size();
  p.sign.assign(fixed_cols, 1.0);
  p.shift.assign(fixed_cols, 0.0);
  for (std::size_t j = 0; j < fixed_cols; ++j) {
    double l = cols[j].lo, u = cols[j].up;
    bool boxed = false;
    if (l == -kInf && u == kInf) {
      l = -100.0;
      u = 100.0;
      boxed = true;
    }
    if (l == -kInf) {
      // (-inf, u]: reflect around the upper bound.
      p.sign[j] = -1.0;
      p.shift[j] = u;
      continue;
    }
    p.shift[j] = l;
    if (u < kInf) {
      int bound_row = next_row++;
      cols[j].entries.push_back({bound_row, 1.0});
      WorkColumn t;
      t.entries.push_back({bound_row, 1.0});
      cols.push_back(std::move(t));
      p.sign.push_back(1.0);
      p.shift.push_back(0.0);
      b_base.push_back(u);
      if (boxed)
        p.free_boxes.push_back({static_cast<int>(j), -100.0, 100.0,
                                static_cast<int>(cols.size()) - 1, bound_row});
    }
  }

  const int m = next_row;
  const int n = static_cast<int>(cols.size());
  std::vector<Triplet> a_trips;
  for (int j = 0; j < n; ++j)
    for (auto [row, v] : cols[j].entries) a_trips.push_back({row, j, v * p.sign[j]});
  p.A = SparseMatrix::from_triplets(m, n, a_trips);

  std::vector<Triplet> q_trips;
  for (const auto& t : model.quad)
    q_trips.push_back({t.row, t.col, t.value * p.sign[t.row] * p.sign[t.col]});
  p.Q = SparseMatrix::from_triplets(n, n, q_trips, Symmetry::SymmetricLower);
  for (int j = 0; j < n; ++j)
    if (p.Q.coeff(j, j) < 0.0)
      throw std::invalid_argument("negative diagonal in quadratic objective");
  if (check_psd && p.Q.nnz() > 0 && n <= kDenseEigDimensionCap) {
    DenseMatrix qd = DenseMatrix::from_sparse(p.Q);
    double ridge = 1e-12 * (1.0 + qd.inf_norm());
    for (int i = 0; i < n; ++i) qd(i, i) += ridge;
    DenseMatrix L;
    if (!dense_cholesky(qd, L))
      throw std::invalid_argument("quadratic objective is not positive semi-definite");
  }

  p.c_base.assign(n, 0.0);
  for (int j = 0; j < n0; ++j) p.c_base[j] = cols[j].cost;
  p.b_base = std::move(b_base);
  p.base_constant = model.objective_constant;
  p.rebuild_derived();
  return p;
}

bool expand_free_boxes(StandardQP& problem, std::span<const double> x_std) {
  bool changed = false;
  for (auto& box : problem.free_boxes) {
    const double x_orig =
        problem.sign[box.column] * x_std[box.column] + problem.shift[box.column];
    const double width = box.upper - box.lower;
    const double margin = 0.01 * width;
    if (x_orig >= box.upper - margin || x_orig <= box.lower + margin) {
      box.lower *= 2.0;
      box.upper *= 2.0;
      problem.shift[box.column] = box.lower;
      problem.b_base[box.bound_row] = box.upper;
      changed = true;
    }
  }
  if (changed) problem.rebuild_derived();
  return changed;
}

}  // namespace regipm
