#include "regipm/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "regipm/mps.hpp"
#include "regipm/spectral.hpp"

namespace regipm {

namespace {

constexpr const char* kCsvVersion = "# regipm bench csv v1";
constexpr const char* kCsvHeader = "problem,mode,status,iterations,seconds,objective";

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::IterationLimit:
      return "iteration-limit";
    case SolveStatus::FactorizationStalled:
      return "factorization-stalled";
  }
  return "error";
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string mode_name(RegMode mode) {
  switch (mode) {
    case RegMode::NonDiagonal:
      return "nondiag";
    case RegMode::Uniform:
      return "uniform";
    case RegMode::None:
      return "none";
  }
  return "?";
}

RegMode mode_from_name(const std::string& name) {
  if (name == "nondiag") return RegMode::NonDiagonal;
  if (name == "uniform") return RegMode::Uniform;
  if (name == "none") return RegMode::None;
  throw std::invalid_argument("unknown regularization mode '" + name + "'");
}

RunResult run_single(const std::string& path, const RunOptions& opts) {
  RunResult result;
  auto model = parse_mps_file(path);
  auto problem = to_standard_form(model);
  result.record.problem =
      model.name.empty() ? std::filesystem::path(path).stem().string() : model.name;
  result.record.mode = mode_name(opts.mode);

  SolveOptions sopts;
  sopts.mode = opts.mode;
  sopts.tol = opts.tol;
  sopts.maxit = opts.maxit;
  const bool certify = opts.certify && problem.rows() + problem.cols() <= kCertifyDimensionCap;
  if (certify) {
    sopts.observer = [&](const IterationSnapshot& snap) {
      auto certs = certify_iteration(snap);
      if (certs.certificates.empty() && !certs.spectral_radius && certs.gershgorin.empty())
        return;
      ++result.certified_iterations;
      if (!certs.all_pass()) result.certificates_all_pass = false;
      if (opts.certificate_stream)
        for (const auto& c : certs.certificates) dump_certificate(*opts.certificate_stream, c);
    };
  }

  result.report = solve(problem, sopts);
  result.record.status = status_name(result.report.status);
  result.record.iterations = result.report.iterations;
  result.record.seconds = result.report.total_seconds;
  result.record.objective = result.report.objective;
  result.record.iters.reserve(result.report.history.size());
  for (const auto& h : result.report.history)
    result.record.iters.push_back({h.k, h.size_n, h.reg_thr, h.delta_d, h.fact_seconds,
                                   h.nnz_system, h.nnz_factor, h.step_x, h.step_z, h.sigma,
                                   h.mu});
  return result;
}

std::vector<BenchRecord> run_batch(const std::string& dir, const std::vector<RegMode>& modes,
                                   double tol, int maxit) {
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    if (ext == ".mps" || ext == ".qps" || ext == ".MPS" || ext == ".QPS")
      files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());

  std::vector<BenchRecord> records;
  for (const auto& file : files) {
    for (RegMode mode : modes) {
      RunOptions opts;
      opts.mode = mode;
      opts.tol = tol;
      opts.maxit = maxit;
      try {
        records.push_back(run_single(file, opts).record);
      } catch (const std::exception&) {
        BenchRecord rec;
        rec.problem = std::filesystem::path(file).stem().string();
        rec.mode = mode_name(mode);
        rec.status = "error";
        records.push_back(rec);
      }
    }
  }
  return records;
}

void write_records_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
  os << kCsvVersion << '\n' << kCsvHeader << '\n';
  for (const auto& r : records)
    os << r.problem << ',' << r.mode << ',' << r.status << ',' << r.iterations << ','
       << format_double(r.seconds) << ',' << format_double(r.objective) << '\n';
}

std::vector<BenchRecord> parse_records_csv(std::istream& is) {
  std::vector<BenchRecord> out;
  std::string line;
  bool saw_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!saw_header) {
      if (line != kCsvHeader) throw std::runtime_error("unexpected bench csv header: " + line);
      saw_header = true;
      continue;
    }
    auto f = split_csv_line(line);
    if (f.size() != 6) throw std::runtime_error("malformed bench csv row: " + line);
    BenchRecord r;
    r.problem = f[0];
    r.mode = f[1];
    r.status = f[2];
    r.iterations = std::stoi(f[3]);
    r.seconds = std::stod(f[4]);
    r.objective = std::stod(f[5]);
    out.push_back(std::move(r));
  }
  if (!saw_header) throw std::runtime_error("bench csv has no header");
  return out;
}

void write_iterations_csv(std::ostream& os, const BenchRecord& record) {
  os << "# regipm iteration csv v1\n";
  os << "problem,mode,k,size_n,reg_thr,delta_d,fact_seconds,nnz_system,nnz_factor,"
        "step_x,step_z,sigma,mu\n";
  for (const auto& it : record.iters)
    os << record.problem << ',' << record.mode << ',' << it.k << ',' << it.size_n << ','
       << format_double(it.reg_thr) << ',' << format_double(it.delta_d) << ','
       << format_double(it.fact_seconds) << ',' << it.nnz_system << ',' << it.nnz_factor << ','
       << format_double(it.step_x) << ',' << format_double(it.step_z) << ','
       << format_double(it.sigma) << ',' << format_double(it.mu) << '\n';
}

namespace {

struct ProfileData {
  std::vector<std::string> solvers;
  std::vector<std::string> problems;
  // ratio[solver][problem]; infinity marks a failure.
  std::vector<std::vector<double>> ratios;
};

ProfileData profile_ratios(const std::vector<BenchRecord>& records, const std::string& metric) {
  if (metric != "time" && metric != "iter")
    throw std::invalid_argument("profile metric must be 'time' or 'iter'");
  ProfileData data;
  std::map<std::string, int> solver_idx;
  std::map<std::string, int> problem_idx;
  for (const auto& r : records) {
    if (!solver_idx.count(r.mode)) {
      solver_idx[r.mode] = static_cast<int>(data.solvers.size());
      data.solvers.push_back(r.mode);
    }
    if (!problem_idx.count(r.problem)) {
      problem_idx[r.problem] = static_cast<int>(data.problems.size());
      data.problems.push_back(r.problem);
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> metric_v(data.solvers.size(),
                                            std::vector<double>(data.problems.size(), inf));
  for (const auto& r : records) {
    double v = inf;
    if (r.status == "optimal") v = metric == "time" ? r.seconds : r.iterations;
    metric_v[solver_idx[r.mode]][problem_idx[r.problem]] = v;
  }
  data.ratios.assign(data.solvers.size(), std::vector<double>(data.problems.size(), inf));
  for (std::size_t p = 0; p < data.problems.size(); ++p) {
    double best = inf;
    for (std::size_t s = 0; s < data.solvers.size(); ++s)
      best = std::min(best, metric_v[s][p]);
    for (std::size_t s = 0; s < data.solvers.size(); ++s) {
      if (metric_v[s][p] == inf) continue;
      data.ratios[s][p] = best > 0.0 ? metric_v[s][p] / best : 1.0;
    }
  }
  return data;
}

}  // namespace

double profile_fraction(const std::vector<BenchRecord>& records, const std::string& solver,
                        const std::string& metric, double tau) {
  auto data = profile_ratios(records, metric);
  auto it = std::find(data.solvers.begin(), data.solvers.end(), solver);
  if (it == data.solvers.end()) throw std::invalid_argument("unknown solver '" + solver + "'");
  const auto& row = data.ratios[it - data.solvers.begin()];
  int solved = 0;
  for (double r : row)
    if (r <= tau) ++solved;
  return row.empty() ? 0.0 : static_cast<double>(solved) / row.size();
}

PerformanceProfile performance_profile(const std::vector<BenchRecord>& records,
                                       const std::string& metric) {
  auto data = profile_ratios(records, metric);
  PerformanceProfile prof;
  prof.solvers = data.solvers;
  double max_ratio = 2.0;
  for (const auto& row : data.ratios)
    for (double r : row)
      if (std::isfinite(r)) max_ratio = std::max(max_ratio, r);
  const double top = std::log10(max_ratio * 1.05);
  const int points = 101;
  prof.taus.resize(points);
  for (int i = 0; i < points; ++i) prof.taus[i] = std::pow(10.0, top * i / (points - 1));
  prof.fractions.assign(prof.solvers.size(), std::vector<double>(points, 0.0));
  for (std::size_t s = 0; s < prof.solvers.size(); ++s)
    for (int i = 0; i < points; ++i) {
      int solved = 0;
      for (double r : data.ratios[s])
        if (r <= prof.taus[i]) ++solved;
      prof.fractions[s][i] =
          data.problems.empty() ? 0.0 : static_cast<double>(solved) / data.problems.size();
    }
  return prof;
}

void write_profile_csv(std::ostream& os, const PerformanceProfile& profile) {
  os << "# regipm profile csv v1\n";
  os << "tau";
  for (const auto& s : profile.solvers) os << ',' << s;
  os << '\n';
  for (std::size_t i = 0; i < profile.taus.size(); ++i) {
    os << format_double(profile.taus[i]);
    for (std::size_t s = 0; s < profile.solvers.size(); ++s)
      os << ',' << format_double(profile.fractions[s][i]);
    os << '\n';
  }
}

}  // namespace regipm
