#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "regipm/bench.hpp"
#include "regipm/mps.hpp"
#include "regipm/spectral.hpp"

namespace py = pybind11;
using namespace regipm;

namespace {

py::dict run_to_dict(const RunResult& res, const std::string& certificates) {
  py::dict d;
  d["problem"] = res.record.problem;
  d["mode"] = res.record.mode;
  d["status"] = res.record.status;
  d["iterations"] = res.record.iterations;
  d["objective"] = res.record.objective;
  d["seconds"] = res.record.seconds;
  d["primal_residual"] = res.report.primal_residual;
  d["dual_residual"] = res.report.dual_residual;
  d["mu"] = res.report.mu;
  d["certified_iterations"] = res.certified_iterations;
  d["certificates_all_pass"] = res.certificates_all_pass;
  if (!certificates.empty()) d["certificates"] = certificates;
  py::list history;
  for (const auto& it : res.record.iters) {
    py::dict h;
    h["k"] = it.k;
    h["size_n"] = it.size_n;
    h["reg_thr"] = it.reg_thr;
    h["delta_d"] = it.delta_d;
    h["fact_seconds"] = it.fact_seconds;
    h["nnz_system"] = it.nnz_system;
    h["nnz_factor"] = it.nnz_factor;
    h["step_x"] = it.step_x;
    h["step_z"] = it.step_z;
    h["sigma"] = it.sigma;
    h["mu"] = it.mu;
    history.append(h);
  }
  d["history"] = history;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Interior point LP/QP solver with dynamic non-diagonal regularization";
  m.attr("__version__") = "0.1.0";

  m.def(
      "solve_file",
      [](const std::string& path, const std::string& mode, double tol, int maxit,
         bool certify) {
        RunOptions opts;
        opts.mode = mode_from_name(mode);
        opts.tol = tol;
        opts.maxit = maxit;
        opts.certify = certify;
        std::ostringstream certs;
        if (certify) opts.certificate_stream = &certs;
        auto res = run_single(path, opts);
        return run_to_dict(res, certs.str());
      },
      py::arg("path"), py::arg("mode") = "nondiag", py::arg("tol") = 0.0,
      py::arg("maxit") = 200, py::arg("certify") = false,
      "Parse an MPS/QPS file, convert to standard form and solve it.\n"
      "Returns a dict with status, iterations, objective, residuals and the\n"
      "per-iteration history; with certify=True the spectral certificates are\n"
      "evaluated every iteration (desk-scale problems only) and returned as\n"
      "JSON lines under 'certificates'.");

  m.def(
      "run_batch",
      [](const std::string& dir, const std::vector<std::string>& modes, double tol,
         int maxit) {
        std::vector<RegMode> ms;
        for (const auto& s : modes) ms.push_back(mode_from_name(s));
        auto records = run_batch(dir, ms, tol, maxit);
        py::list out;
        for (const auto& r : records) {
          py::dict d;
          d["problem"] = r.problem;
          d["mode"] = r.mode;
          d["status"] = r.status;
          d["iterations"] = r.iterations;
          d["seconds"] = r.seconds;
          d["objective"] = r.objective;
          out.append(d);
        }
        return out;
      },
      py::arg("dir"), py::arg("modes") = std::vector<std::string>{"nondiag", "uniform"},
      py::arg("tol") = 0.0, py::arg("maxit") = 200,
      "Solve every MPS/QPS file in a directory under each mode.");

  m.def(
      "profile_fraction",
      [](const std::vector<py::dict>& records, const std::string& solver,
         const std::string& metric, double tau) {
        std::vector<BenchRecord> rs;
        for (const auto& d : records) {
          BenchRecord r;
          r.problem = d["problem"].cast<std::string>();
          r.mode = d["mode"].cast<std::string>();
          r.status = d["status"].cast<std::string>();
          r.iterations = d["iterations"].cast<int>();
          r.seconds = d["seconds"].cast<double>();
          rs.push_back(std::move(r));
        }
        return profile_fraction(rs, solver, metric, tau);
      },
      py::arg("records"), py::arg("solver"), py::arg("metric"), py::arg("tau"),
      "Fraction of problems a solver finishes within ratio tau of the best.");
}
