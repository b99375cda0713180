// Command-line front end: solve a single problem, benchmark a directory of
// problems across regularization modes, or turn bench CSVs into performance
// profiles.
//
// Exit codes: 0 success, 1 solver finished without reaching optimality,
// 2 input error (bad file, bad arguments).

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "regipm/bench.hpp"

namespace {

int do_solve(const std::string& file, const std::string& mode, double tol, int maxit,
             bool certify, const std::string& csv_path) {
  regipm::RunOptions opts;
  opts.mode = regipm::mode_from_name(mode);
  opts.tol = tol;
  opts.maxit = maxit;
  opts.certify = certify;
  std::ostringstream cert_lines;
  if (certify) opts.certificate_stream = &cert_lines;

  auto res = regipm::run_single(file, opts);
  const auto& rec = res.record;
  std::cout << "problem:    " << rec.problem << '\n'
            << "mode:       " << rec.mode << '\n'
            << "status:     " << rec.status << '\n'
            << "iterations: " << rec.iterations << '\n'
            << "objective:  " << rec.objective << '\n'
            << "seconds:    " << rec.seconds << '\n'
            << "primal res: " << res.report.primal_residual << '\n'
            << "dual res:   " << res.report.dual_residual << '\n'
            << "mu:         " << res.report.mu << '\n';
  if (certify) {
    std::cout << "certified iterations: " << res.certified_iterations << " ("
              << (res.certificates_all_pass ? "all bounds hold" : "BOUND VIOLATION") << ")\n";
    std::cout << cert_lines.str();
  }
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) {
      std::cerr << "cannot write " << csv_path << '\n';
      return 2;
    }
    regipm::write_iterations_csv(out, rec);
  }
  return rec.status == "optimal" ? 0 : 1;
}

int do_bench(const std::string& dir, const std::string& modes_arg, double tol, int maxit,
             const std::string& csv_path) {
  std::vector<regipm::RegMode> modes;
  std::stringstream ss(modes_arg);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) modes.push_back(regipm::mode_from_name(tok));
  if (modes.empty()) throw CLI::ValidationError("--modes", "no modes given");

  auto records = regipm::run_batch(dir, modes, tol, maxit);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) {
      std::cerr << "cannot write " << csv_path << '\n';
      return 2;
    }
    regipm::write_records_csv(out, records);
  } else {
    regipm::write_records_csv(std::cout, records);
  }
  int failures = 0;
  for (const auto& r : records)
    if (r.status != "optimal") ++failures;
  std::cerr << records.size() << " runs, " << failures << " not optimal\n";
  return 0;
}

int do_profile(const std::vector<std::string>& csvs, const std::string& metric,
               const std::string& out_path) {
  std::vector<regipm::BenchRecord> records;
  for (const auto& path : csvs) {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "cannot read " << path << '\n';
      return 2;
    }
    auto part = regipm::parse_records_csv(in);
    records.insert(records.end(), part.begin(), part.end());
  }
  auto prof = regipm::performance_profile(records, metric);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << '\n';
      return 2;
    }
    regipm::write_profile_csv(out, prof);
  } else {
    regipm::write_profile_csv(std::cout, prof);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regipm: interior point LP/QP solver with dynamic non-diagonal regularization"};
  app.require_subcommand(1);

  std::string file, dir, mode = "nondiag", modes = "nondiag,uniform";
  std::string csv_path, out_path, metric = "time";
  std::vector<std::string> csvs;
  double tol = 0.0;
  int maxit = 200;
  bool certify = false;

  auto* solve_cmd = app.add_subcommand("solve", "solve one MPS/QPS file");
  solve_cmd->add_option("file", file, "problem file")->required();
  solve_cmd->add_option("--mode", mode, "nondiag|uniform|none")->capture_default_str();
  solve_cmd->add_option("--tol", tol, "termination tolerance (0 = default)")
      ->envname("REGIPM_TOL");
  solve_cmd->add_option("--maxit", maxit, "iteration limit")
      ->envname("REGIPM_MAXIT")
      ->capture_default_str();
  solve_cmd->add_flag("--certify", certify, "verify spectral bounds each iteration");
  solve_cmd->add_option("--csv", csv_path, "write per-iteration diagnostics CSV");

  auto* bench_cmd = app.add_subcommand("bench", "run every problem in a directory");
  bench_cmd->add_option("dir", dir, "directory of MPS/QPS files")->required();
  bench_cmd->add_option("--modes", modes, "comma-separated mode list")->capture_default_str();
  bench_cmd->add_option("--tol", tol, "termination tolerance (0 = default)")
      ->envname("REGIPM_TOL");
  bench_cmd->add_option("--maxit", maxit, "iteration limit")
      ->envname("REGIPM_MAXIT")
      ->capture_default_str();
  bench_cmd->add_option("--csv", csv_path, "summary CSV path (stdout when omitted)");

  auto* profile_cmd = app.add_subcommand("profile", "performance profile from bench CSVs");
  profile_cmd->add_option("csv", csvs, "bench CSV files")->required()->expected(-1);
  profile_cmd->add_option("--metric", metric, "time|iter")->capture_default_str();
  profile_cmd->add_option("--out", out_path, "profile CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve_cmd->parsed()) return do_solve(file, mode, tol, maxit, certify, csv_path);
    if (bench_cmd->parsed()) return do_bench(dir, modes, tol, maxit, csv_path);
    if (profile_cmd->parsed()) return do_profile(csvs, metric, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
