#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "regipm/ipm.hpp"

namespace regipm {

std::string mode_name(RegMode mode);
RegMode mode_from_name(const std::string& name);

struct IterationStat {
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
};

struct BenchRecord {
  std::string problem;
  std::string mode;
  std::string status;  // optimal | iteration-limit | factorization-stalled | error
  int iterations = 0;
  double seconds = 0.0;
  double objective = 0.0;
  std::vector<IterationStat> iters;  // per-iteration diagnostics (not in the summary CSV)

  bool operator==(const BenchRecord& o) const {
    return problem == o.problem && mode == o.mode && status == o.status &&
           iterations == o.iterations && seconds == o.seconds && objective == o.objective;
  }
};

struct RunOptions {
  RegMode mode = RegMode::NonDiagonal;
  double tol = 0.0;  // 0 -> per-problem default
  int maxit = 200;
  bool certify = false;
  std::ostream* certificate_stream = nullptr;  // JSON lines when certifying
};

struct RunResult {
  BenchRecord record;
  SolveReport report;
  int certified_iterations = 0;
  bool certificates_all_pass = true;
};

// Certification is desk-scale only: iterations are certified when the
// standard form satisfies n + m <= this cap.
inline constexpr int kCertifyDimensionCap = 300;

RunResult run_single(const std::string& path, const RunOptions& opts);

std::vector<BenchRecord> run_batch(const std::string& dir, const std::vector<RegMode>& modes,
                                   double tol, int maxit);

void write_records_csv(std::ostream& os, const std::vector<BenchRecord>& records);
std::vector<BenchRecord> parse_records_csv(std::istream& is);
void write_iterations_csv(std::ostream& os, const BenchRecord& record);

struct PerformanceProfile {
  std::vector<std::string> solvers;
  std::vector<double> taus;                    // log-spaced, starting at 1
  std::vector<std::vector<double>> fractions;  // per solver, per tau
};

// Dolan-More profile: r_{p,s} = metric_{p,s} / min_s metric_{p,s}; failures
// contribute an infinite ratio. metric is "time" or "iter".
PerformanceProfile performance_profile(const std::vector<BenchRecord>& records,
                                       const std::string& metric);

// Exact curve value for one solver at one ratio.
double profile_fraction(const std::vector<BenchRecord>& records, const std::string& solver,
                        const std::string& metric, double tau);

void write_profile_csv(std::ostream& os, const PerformanceProfile& profile);

}  // namespace regipm
