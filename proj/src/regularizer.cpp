#include "regipm/regularizer.hpp"

#include <algorithm>
#include <cmath>

namespace regipm {

RegSchedule make_schedule(double tol, double norm_a_two) {
  RegSchedule s;
  s.reg_thr = 1.0;
  const double denom = norm_a_two * norm_a_two;
  s.epsilon = std::max(denom > 0 ? 0.1 * tol / denom : 0.1 * tol, 1e-13);
  s.iteration = 0;
  return s;
}

void update_schedule(RegSchedule& sched, double mu_prev, double mu_new) {
  if (!(mu_prev > 0.0) || !(mu_new > 0.0))
    throw std::invalid_argument("update_schedule: mu must be positive");
  const double ratio = std::min(1.0, mu_new / mu_prev);
  sched.reg_thr = std::max(sched.reg_thr * ratio, sched.epsilon);
  ++sched.iteration;
}

void clamp_theta(std::span<double> theta) {
  for (double& t : theta) t = std::clamp(t, 1e-30, 1e30);
}

ColumnPartition partition_columns(std::span<const double> theta, double reg_thr,
                                  double norm_aat, std::optional<double> norm_qqt) {
  ColumnPartition part;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (!(theta[j] > 0.0)) throw std::invalid_argument("partition_columns: theta must be positive");
    bool in_n = theta[j] * norm_aat <= reg_thr;
    if (in_n && norm_qqt) in_n = theta[j] * *norm_qqt <= reg_thr;
    (in_n ? part.indicesN : part.indicesB).push_back(static_cast<int>(j));
  }
  return part;
}

RegPlan uniform_plan(const RegSchedule& sched, bool is_qp) {
  RegPlan plan;
  plan.mode = RegMode::Uniform;
  plan.delta_d = sched.reg_thr;
  if (is_qp) {
    plan.delta_pN = sched.reg_thr;
    plan.delta_pB = sched.reg_thr;
  }
  return plan;
}

}  // namespace regipm
