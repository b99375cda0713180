#include "regipm/ipm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "regipm/ordering.hpp"

namespace regipm {
namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::vector<quad> lift(std::span<const double> v) {
  std::vector<quad> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

std::vector<double> lower_prec(std::span<const quad> v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Theta = X Z^{-1}, clamped to [1e-30, 1e30] entrywise.
std::vector<quad> theta_wide(const IterateState& st) {
  std::vector<quad> th(st.x.size());
  for (std::size_t i = 0; i < th.size(); ++i) {
    quad t = quad(st.x[i]) / quad(st.z[i]);
    if (t < quad(1e-30)) t = quad(1e-30);
    if (t > quad(1e30)) t = quad(1e30);
    th[i] = t;
  }
  return th;
}

// Dual-side Newton right-hand side c + Qx - A^T y - sigma mu X^{-1} e.
std::vector<quad> xi_dual(const StandardQP& p, const IterateState& st, double sigma) {
  const auto xq = lift(st.x);
  std::vector<quad> xi(p.cols());
  const SparseMatrixQ Aq = p.A.cast<quad>();
  auto aty = Aq.multiply_transpose(lift(st.y));
  std::vector<quad> qx(p.cols(), quad(0));
  if (!p.is_lp()) qx = p.Q.cast<quad>().multiply(xq);
  const quad target = quad(sigma) * quad(st.mu);
  for (int j = 0; j < p.cols(); ++j) xi[j] = quad(p.c[j]) + qx[j] - aty[j] - target / xq[j];
  return xi;
}

std::vector<quad> xi_primal(const StandardQP& p, const IterateState& st) {
  const SparseMatrixQ Aq = p.A.cast<quad>();
  auto ax = Aq.multiply(lift(st.x));
  std::vector<quad> xi(p.rows());
  for (int i = 0; i < p.rows(); ++i) xi[i] = quad(p.b[i]) - ax[i];
  return xi;
}

// Delta z = -X^{-1} Z Delta x - Z e + sigma mu X^{-1} e per component.
std::vector<quad> recover_dz(const IterateState& st, std::span<const quad> dx, double sigma) {
  std::vector<quad> dz(dx.size());
  const quad target = quad(sigma) * quad(st.mu);
  for (std::size_t i = 0; i < dx.size(); ++i) {
    const quad xi = st.x[i], zi = st.z[i];
    dz[i] = -(zi / xi) * dx[i] - zi + target / xi;
  }
  return dz;
}

Direction pack_direction(std::span<const quad> dx, std::span<const quad> dy,
                         std::span<const quad> dz, const IterateState& st) {
  Direction d;
  d.dx = lower_prec(dx);
  d.dy = lower_prec(dy);
  d.dz = lower_prec(dz);
  d.dr.resize(st.r.size());
  for (std::size_t i = 0; i < st.r.size(); ++i) d.dr[i] = d.dy[i] - st.r[i];
  d.ds.resize(st.s.size());
  for (std::size_t i = 0; i < st.s.size(); ++i) d.ds[i] = d.dx[i] - st.s[i];
  return d;
}

}  // namespace

Residuals compute_residuals(const StandardQP& p, const IterateState& st) {
  Residuals r;
  auto ax = p.A.multiply(st.x);
  r.primal.resize(p.rows());
  for (int i = 0; i < p.rows(); ++i) r.primal[i] = p.b[i] - ax[i];
  auto aty = p.A.multiply_transpose(st.y);
  r.dual.resize(p.cols());
  for (int j = 0; j < p.cols(); ++j) r.dual[j] = p.c[j] - aty[j] - st.z[j];
  if (!p.is_lp()) {
    auto qx = p.Q.multiply(st.x);
    for (int j = 0; j < p.cols(); ++j) r.dual[j] += qx[j];
  }
  r.mu = st.mu;
  r.primal_rel = norm2(r.primal) / (norm2(p.b) + 1.0);
  r.dual_rel = norm2(r.dual) / (norm2(p.c) + 1.0);
  return r;
}

double centring_sigma(double prev_step_x, double prev_step_z) {
  const double sx = std::pow(1.0 - prev_step_x, 5);
  const double sz = std::pow(1.0 - prev_step_z, 5);
  return std::clamp(std::max(sx, sz), 0.05, 0.95);
}

std::pair<double, double> step_lengths(const IterateState& st, const Direction& dir) {
  const double tau = 0.995;
  double ax = 1.0, az = 1.0;
  for (std::size_t i = 0; i < st.x.size(); ++i) {
    if (dir.dx[i] < 0.0) ax = std::min(ax, st.x[i] / -dir.dx[i]);
    if (dir.dz[i] < 0.0) az = std::min(az, st.z[i] / -dir.dz[i]);
  }
  return {tau * ax, tau * az};
}

IterateState initial_point(const StandardQP& p) {
  const int m = p.rows(), n = p.cols();
  SparseMatrix aat = aat_product<double>(p.A, nullptr, nullptr);
  auto ordering = min_degree_order(aat);
  auto chol = cholesky(aat, &ordering);
  if (!chol.ok()) {
    // Rank-deficient A: ridge and retry.
    const double base = 1e-8 * (1.0 + inf_norm_sym(aat));
    for (double ridge = base; !chol.ok() && ridge <= base * 1e12; ridge *= 1e6) {
      std::vector<Triplet> trips;
      for (int c = 0; c < m; ++c)
        for (int q = aat.col_begin(c); q < aat.col_end(c); ++q)
          trips.push_back({aat.row_index(q), c, aat.value(q)});
      for (int i = 0; i < m; ++i) trips.push_back({i, i, ridge});
      auto ridged = SparseMatrix::from_triplets(m, m, trips, Symmetry::SymmetricLower);
      chol = cholesky(ridged, &ordering);
    }
    if (!chol.ok()) throw std::runtime_error("initial point: cannot factor A A^T");
  }

  auto v = chol.factor->solve(p.b);
  std::vector<double> x_tilde = p.A.multiply_transpose(v);
  std::vector<double> cqx = p.c;
  if (!p.is_lp()) {
    auto qx = p.Q.multiply(x_tilde);
    for (int j = 0; j < n; ++j) cqx[j] += qx[j];
  }
  auto y_tilde = chol.factor->solve(p.A.multiply(cqx));
  auto aty = p.A.multiply_transpose(y_tilde);
  std::vector<double> z_tilde(n);
  for (int j = 0; j < n; ++j) z_tilde[j] = cqx[j] - aty[j];

  const double min_x = *std::min_element(x_tilde.begin(), x_tilde.end());
  const double min_z = *std::min_element(z_tilde.begin(), z_tilde.end());
  const double dx = std::max(-1.5 * min_x, 0.0);
  const double dz = std::max(-1.5 * min_z, 0.0);
  double inner = 0.0, sum_x = 0.0, sum_z = 0.0;
  for (int j = 0; j < n; ++j) {
    inner += (x_tilde[j] + dx) * (z_tilde[j] + dz);
    sum_x += x_tilde[j] + dx;
    sum_z += z_tilde[j] + dz;
  }
  double dx_hat = dx + (sum_z > 0.0 ? 0.5 * inner / sum_z : 1.0);
  double dz_hat = dz + (sum_x > 0.0 ? 0.5 * inner / sum_x : 1.0);

  IterateState st;
  st.x.resize(n);
  st.z.resize(n);
  for (int j = 0; j < n; ++j) {
    st.x[j] = x_tilde[j] + dx_hat;
    st.z[j] = z_tilde[j] + dz_hat;
  }
  // Last-resort positivity: the shifts above can land exactly on zero.
  const double floor_x = *std::min_element(st.x.begin(), st.x.end());
  if (floor_x <= 0.0)
    for (double& xi : st.x) xi += 1.0 - floor_x;
  const double floor_z = *std::min_element(st.z.begin(), st.z.end());
  if (floor_z <= 0.0)
    for (double& zi : st.z) zi += 1.0 - floor_z;
  st.y = y_tilde;
  st.r.assign(m, 0.0);
  st.s.assign(n, 0.0);
  st.mu = std::inner_product(st.x.begin(), st.x.end(), st.z.begin(), 0.0) / n;
  return st;
}

StepOutcome newton_step_lp(const StandardQP& p, const IterateState& st, RegMode mode,
                           const ColumnPartition& part, double reg_thr, double sigma,
                           const std::vector<int>* ordering) {
  StepOutcome out;
  const int m = p.rows(), n = p.cols();
  const SparseMatrixQ Aq = p.A.cast<quad>();
  auto theta = theta_wide(st);
  auto xi_d = xi_dual(p, st, sigma);
  auto xi_p = xi_primal(p, st);

  SparseMatrixQ matrix;
  if (mode == RegMode::NonDiagonal) {
    auto sys = build_lp_normal_matrix<quad>(Aq, theta, part, reg_thr);
    matrix = std::move(sys.matrix);
    out.delta_d = to_double(sys.delta_d);
  } else {
    std::vector<TripletT<quad>> trips;
    auto full = aat_product<quad>(Aq, &theta, nullptr);
    for (int c = 0; c < m; ++c)
      for (int q = full.col_begin(c); q < full.col_end(c); ++q)
        trips.push_back({full.row_index(q), c, full.value(q)});
    if (mode == RegMode::Uniform) {
      for (int i = 0; i < m; ++i) trips.push_back({i, i, quad(reg_thr)});
      out.delta_d = reg_thr;
    }
    matrix = SparseMatrixQ::from_triplets(m, m, trips, Symmetry::SymmetricLower);
  }
  out.nnz_system = matrix.nnz();

  std::vector<int> natural;
  if (!ordering) {
    natural.resize(m);
    std::iota(natural.begin(), natural.end(), 0);
  }
  detail::LdlCore<quad> core;
  if (!detail::ldl_factor<quad>(matrix, ordering ? *ordering : natural, nullptr, core,
                                out.failure))
    return out;
  out.nnz_factor = core.nnz_factor();
  out.inertia = {0, m};

  // Normal equations: rhs = xi_p + A Theta xi_d, then back out dx and dz.
  std::vector<quad> scaled(n);
  for (int j = 0; j < n; ++j) scaled[j] = theta[j] * xi_d[j];
  auto a_scaled = Aq.multiply(scaled);
  std::vector<quad> rhs(m);
  for (int i = 0; i < m; ++i) rhs[i] = xi_p[i] + a_scaled[i];
  auto dy = core.solve(rhs);

  auto aty = Aq.multiply_transpose(dy);
  std::vector<quad> dx(n);
  for (int j = 0; j < n; ++j) dx[j] = theta[j] * (aty[j] - xi_d[j]);
  auto dz = recover_dz(st, dx, sigma);
  out.direction = pack_direction(dx, dy, dz, st);
  return out;
}

StepOutcome newton_step_qp(const StandardQP& p, const IterateState& st, RegMode mode,
                           const ColumnPartition& part, double reg_thr, double sigma,
                           const std::vector<int>* ordering) {
  StepOutcome out;
  const int m = p.rows(), n = p.cols();
  const SparseMatrixQ Aq = p.A.cast<quad>();
  const SparseMatrixQ Qq = p.Q.cast<quad>();
  auto theta = theta_wide(st);
  auto xi_d = xi_dual(p, st, sigma);
  auto xi_p = xi_primal(p, st);

  std::vector<quad> dx(n), dy(m);
  if (mode != RegMode::NonDiagonal) {
    // Full augmented system with uniform (or zero) regularization. Without a
    // (2,2) block the x-then-y elimination order is what makes 1x1 pivots
    // valid, so the natural order stands in for a fill ordering here.
    const quad rho = mode == RegMode::Uniform ? quad(reg_thr) : quad(0);
    if (mode == RegMode::Uniform) {
      out.delta_d = reg_thr;
      out.delta_pN = reg_thr;
      out.delta_pB = reg_thr;
    }
    std::vector<TripletT<quad>> trips;
    for (int c = 0; c < n; ++c)
      for (int q = Qq.col_begin(c); q < Qq.col_end(c); ++q)
        trips.push_back({Qq.row_index(q), c, -Qq.value(q)});
    for (int j = 0; j < n; ++j) trips.push_back({j, j, -(quad(1) / theta[j] + rho)});
    for (int c = 0; c < n; ++c)
      for (int q = Aq.col_begin(c); q < Aq.col_end(c); ++q)
        trips.push_back({n + Aq.row_index(q), c, Aq.value(q)});
    if (rho != quad(0))
      for (int i = 0; i < m; ++i) trips.push_back({n + i, n + i, rho});
    auto matrix = SparseMatrixQ::from_triplets(n + m, n + m, trips, Symmetry::SymmetricLower);
    out.nnz_system = matrix.nnz();

    std::vector<PivotSign> signs(n + m, PivotSign::Positive);
    for (int j = 0; j < n; ++j) signs[j] = PivotSign::Negative;
    std::vector<int> natural(n + m);
    std::iota(natural.begin(), natural.end(), 0);
    detail::LdlCore<quad> core;
    if (!detail::ldl_factor<quad>(matrix, ordering ? *ordering : natural, &signs, core,
                                  out.failure))
      return out;
    out.nnz_factor = core.nnz_factor();
    int neg = 0;
    for (quad d : core.diag) neg += d < quad(0);
    out.inertia = {neg, n + m - neg};

    std::vector<quad> rhs(n + m);
    for (int j = 0; j < n; ++j) rhs[j] = xi_d[j];
    for (int i = 0; i < m; ++i) rhs[n + i] = xi_p[i];
    auto sol = core.solve(rhs);
    std::copy(sol.begin(), sol.begin() + n, dx.begin());
    std::copy(sol.begin() + n, sol.end(), dy.begin());
  } else {
    auto sys = build_qp_reduced_system<quad>(Aq, Qq, theta, part, reg_thr);
    out.delta_d = to_double(sys.delta_d);
    out.delta_pN = to_double(sys.delta_pN);
    out.delta_pB = to_double(sys.delta_pB);
    out.qbar_diag.resize(sys.qbar_diag.size());
    for (std::size_t i = 0; i < sys.qbar_diag.size(); ++i)
      out.qbar_diag[i] = to_double(sys.qbar_diag[i]);
    out.nnz_system = sys.matrix.nnz();
    const int n2 = static_cast<int>(part.indicesB.size());

    std::vector<quad> xi_dn(part.indicesN.size()), xi_db(n2);
    for (std::size_t k = 0; k < part.indicesN.size(); ++k) xi_dn[k] = xi_d[part.indicesN[k]];
    for (int k = 0; k < n2; ++k) xi_db[k] = xi_d[part.indicesB[k]];
    std::vector<quad> wn(part.indicesN.size());
    for (std::size_t k = 0; k < wn.size(); ++k) wn[k] = xi_dn[k] / sys.qbar_diag[k];

    std::vector<quad> rhs(n2 + m);
    auto qbn_w = sys.Q_BN.multiply(wn);
    for (int k = 0; k < n2; ++k) rhs[k] = xi_db[k] - qbn_w[k];
    auto an_w = sys.A_N.multiply(wn);
    for (int i = 0; i < m; ++i) rhs[n2 + i] = xi_p[i] + an_w[i];

    std::vector<PivotSign> signs(n2 + m, PivotSign::Positive);
    for (int k = 0; k < n2; ++k) signs[k] = PivotSign::Negative;
    std::vector<int> order;
    if (ordering)
      order = *ordering;
    else
      order = min_degree_order(sys.matrix.template cast<double>());
    detail::LdlCore<quad> core;
    if (!detail::ldl_factor<quad>(sys.matrix, order, &signs, core, out.failure)) return out;
    out.nnz_factor = core.nnz_factor();
    int neg = 0;
    for (quad d : core.diag) neg += d < quad(0);
    out.inertia = {neg, n2 + m - neg};

    auto sol = core.solve(rhs);
    std::copy(sol.begin() + n2, sol.end(), dy.begin());
    // Delta x_N = Qbar^{-1} (A_N^T dy - Q_BN^T dx_B - xi_dN).
    std::vector<quad> dxb(sol.begin(), sol.begin() + n2);
    auto atn_dy = sys.A_N.multiply_transpose(dy);
    auto qbn_dxb = sys.Q_BN.multiply_transpose(dxb);
    for (int k = 0; k < n2; ++k) dx[part.indicesB[k]] = dxb[k];
    for (std::size_t k = 0; k < part.indicesN.size(); ++k)
      dx[part.indicesN[k]] = (atn_dy[k] - qbn_dxb[k] - xi_dn[k]) / sys.qbar_diag[k];
  }

  auto dz = recover_dz(st, dx, sigma);
  out.direction = pack_direction(dx, dy, dz, st);
  return out;
}

SolveReport solve(StandardQP& problem, const SolveOptions& opts) {
  const auto t0 = clock_type::now();
  const bool qp_path = !problem.is_lp() || opts.force_qp_path;
  const double tol = opts.tol > 0.0 ? opts.tol : (problem.is_lp() ? 1e-6 : 1e-8);
  const int n = problem.cols();

  SolveReport report;
  RegSchedule sched = make_schedule(tol, two_norm_estimate(problem.A));
  const double norm_aat = inf_norm_sym(aat_product<double>(problem.A, nullptr, nullptr));
  std::optional<double> norm_qqt;
  if (!problem.is_lp())
    norm_qqt = inf_norm_sym(aat_product<double>(problem.Q.expand_symmetric(), nullptr, nullptr));

  // One fill-reducing ordering for the LP normal-equations pattern; the QP
  // reduced system changes shape with the partition and orders per iteration.
  std::vector<int> lp_ordering;
  if (!qp_path) lp_ordering = min_degree_order(aat_product<double>(problem.A, nullptr, nullptr));

  IterateState state = initial_point(problem);
  double mu_prev = state.mu;

  for (int k = 0; k < opts.maxit; ++k) {
    auto res = compute_residuals(problem, state);
    if (res.primal_rel <= tol && res.dual_rel <= tol && state.mu <= tol) {
      report.status = SolveStatus::Optimal;
      break;
    }
    if (k > 0) update_schedule(sched, mu_prev, state.mu);
    mu_prev = state.mu;
    const double sigma = k == 0 ? 0.5 : centring_sigma(state.prev_step_x, state.prev_step_z);

    std::vector<double> theta_d(n);
    for (int j = 0; j < n; ++j) theta_d[j] = state.x[j] / state.z[j];
    clamp_theta(theta_d);

    StepOutcome step;
    ColumnPartition part;
    RegMode mode_used = opts.mode;
    int retries = 0;
    double fact_seconds = 0.0;
    while (true) {
      if (opts.mode == RegMode::NonDiagonal) {
        part = partition_columns(theta_d, sched.reg_thr, norm_aat, norm_qqt);
        mode_used = part.indicesN.empty() ? RegMode::Uniform : RegMode::NonDiagonal;
      }
      const auto t_fact = clock_type::now();
      step = qp_path
                 ? newton_step_qp(problem, state, mode_used, part, sched.reg_thr, sigma, nullptr)
                 : newton_step_lp(problem, state, mode_used, part, sched.reg_thr, sigma,
                                  &lp_ordering);
      fact_seconds = seconds_since(t_fact);
      if (step.ok()) {
        // Partition condition guarantee: the realized regularization scalars
        // stay below reg_thr whenever N came from the partition test.
        if (mode_used == RegMode::NonDiagonal &&
            (step.delta_d >= sched.reg_thr || step.delta_pB >= sched.reg_thr))
          throw std::logic_error("regularization exceeded reg_thr");
        break;
      }
      // Safeguard: raise reg_thr tenfold and retry; running without
      // regularization leaves nothing to raise, so stall immediately.
      if (opts.mode == RegMode::None || retries >= 6) {
        report.status = SolveStatus::FactorizationStalled;
        report.iterations = k;
        report.final_state = state;
        report.primal_residual = res.primal_rel;
        report.dual_residual = res.dual_rel;
        report.mu = state.mu;
        report.objective = problem.objective_value(state.x);
        report.total_seconds = seconds_since(t0);
        return report;
      }
      sched.reg_thr *= 10.0;
      ++retries;
    }

    auto [ax, az] = step_lengths(state, *step.direction);
    const Direction& dir = *step.direction;

    IterationRecord rec;
    rec.k = k;
    rec.size_n = static_cast<int>(part.indicesN.size());
    rec.reg_thr = sched.reg_thr;
    rec.delta_d = step.delta_d;
    rec.fact_seconds = fact_seconds;
    rec.nnz_system = step.nnz_system;
    rec.nnz_factor = step.nnz_factor;
    rec.step_x = ax;
    rec.step_z = az;
    rec.sigma = sigma;
    rec.mu = state.mu;
    rec.safeguard_retries = retries;
    report.history.push_back(rec);

    if (opts.observer) {
      IterationSnapshot snap;
      snap.k = k;
      snap.qp_path = qp_path;
      snap.mode_used = mode_used;
      snap.sigma = sigma;
      snap.mu = state.mu;
      snap.reg_thr = sched.reg_thr;
      snap.delta_d = step.delta_d;
      snap.delta_pN = step.delta_pN;
      snap.delta_pB = step.delta_pB;
      snap.step_x = ax;
      snap.step_z = az;
      snap.problem = &problem;
      snap.state = &state;
      snap.theta = &theta_d;
      snap.partition = &part;
      snap.qbar_diag = &step.qbar_diag;
      snap.direction = &dir;
      snap.nnz_system = step.nnz_system;
      snap.nnz_factor = step.nnz_factor;
      snap.fact_seconds = fact_seconds;
      snap.ldl_inertia = step.inertia;
      opts.observer(snap);
    }

    for (int j = 0; j < n; ++j) {
      state.x[j] += ax * dir.dx[j];
      state.z[j] += az * dir.dz[j];
      state.s[j] += az * dir.ds[j];
    }
    for (int i = 0; i < problem.rows(); ++i) {
      state.r[i] += ax * dir.dr[i];
      state.y[i] += az * dir.dy[i];
    }
    state.prev_step_x = ax;
    state.prev_step_z = az;
    state.mu = std::inner_product(state.x.begin(), state.x.end(), state.z.begin(), 0.0) / n;
    state.k = k + 1;
    report.iterations = k + 1;

    expand_free_boxes(problem, state.x);
  }

  report.final_state = state;
  auto res = compute_residuals(problem, state);
  report.primal_residual = res.primal_rel;
  report.dual_residual = res.dual_rel;
  report.mu = state.mu;
  report.objective = problem.objective_value(state.x);
  report.total_seconds = seconds_since(t0);
  return report;
}

}  // namespace regipm
