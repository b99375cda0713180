#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regipm/dense.hpp"
#include "regipm/ipm.hpp"

namespace regipm {

struct BoundRecord {
  std::string name;
  double bound = 0.0;     // the proved bound
  double extremal = 0.0;  // the observed quantity
  bool pass = false;
};

struct SpectralCertificate {
  std::string system;
  int iteration = -1;
  std::vector<double> eigenvalues;  // ascending
  Inertia inertia;
  Inertia expected_inertia;
  std::vector<BoundRecord> records;

  bool all_pass() const {
    if (inertia.neg != expected_inertia.neg || inertia.pos != expected_inertia.pos ||
        inertia.zero != expected_inertia.zero)
      return false;
    for (const auto& r : records)
      if (!r.pass) return false;
    return true;
  }
};

// Augmented LP matrix [-Theta^-1, A^T; A, R_d]: inertia (n, m) plus the four
// eigenvalue bounds, and the null-space clause when A is row-rank-deficient.
SpectralCertificate certify_lp_augmented(const DenseMatrix& A, std::span<const double> theta,
                                         const DenseMatrix& Rd, double delta_d);

// Partially reduced LP matrix [-Theta_B^-1, A_B^T; A_B, diag(dstar)].
SpectralCertificate certify_lp_reduced(const DenseMatrix& A_B, std::span<const double> theta_B,
                                       std::span<const double> dstar, double delta_d);

// Augmented QP matrix [-(Q + Theta^-1 + R_p), A^T; A, R_d].
SpectralCertificate certify_qp_augmented(const DenseMatrix& A, const DenseMatrix& Q,
                                         std::span<const double> theta, const DenseMatrix& Rp,
                                         const DenseMatrix& Rd, double delta_d);

// Partially reduced QP matrix [-Hbar, S^T; S, diag(dstar)] with
// S = A_B - A_N Qbar^-1 Q_BN^T.
SpectralCertificate certify_qp_reduced(const DenseMatrix& Hbar, const DenseMatrix& S,
                                       std::span<const double> dstar, double delta_d);

struct GershgorinReport {
  std::vector<double> radii;
  double delta = 0.0;
  double lower_bound = 0.0;  // min positive diagonal of the absorbed block
  double lambda_min = 0.0, lambda_max = 0.0;
  bool pass = false;
};

// Every eigenvalue of the explicit regularization block must sit in
// [lower_bound, 2 delta).
GershgorinReport gershgorin_certify(const DenseMatrix& R, double delta,
                                    std::span<const double> lower_candidates);

struct PerturbationReport {
  int total = 0;
  int qualifying = 0;
  int skipped_clustered = 0;
  int failed = 0;
  double max_violation = 0.0;  // worst (|lam - lam~| - bound), negative when safe
  bool pass = false;
};

// |lambda_i - lambda~_i| <= ||E|| phi_i^2 for eigenvalues of the unregularized
// augmented matrix beyond 2||E||, E = blkdiag(0, delta_d I).
PerturbationReport perturbation_certify_lp(const DenseMatrix& A, std::span<const double> theta,
                                           double delta_d);

// QP counterpart with E = blkdiag(Delta_p, delta_d I); delta_p_diag carries
// the permuted primal regularization diagonal.
PerturbationReport perturbation_certify_qp(const DenseMatrix& A, const DenseMatrix& Q,
                                           std::span<const double> theta,
                                           std::span<const double> delta_p_diag, double delta_d);

struct SpectralRadiusReport {
  double rho = 0.0;
  double margin = 0.0;  // 1 - rho
  bool pass = false;    // rho < 1 with a 1e-12 margin
};

// Generalized eigenvalues of (R, K) for K = A Theta A^T + delta_d I and
// R = off(A_N Theta_N A_N^T) must lie strictly inside (-1, 1).
SpectralRadiusReport spectral_radius_certify(const DenseMatrix& K, const DenseMatrix& R);

// All certificates produced from one solver iteration: the augmented and
// (where applicable) the partially reduced system, the Gershgorin windows of
// every explicit regularization block, and the LP spectral-radius check.
struct IterationCertificates {
  std::vector<SpectralCertificate> certificates;
  std::vector<std::pair<std::string, GershgorinReport>> gershgorin;
  std::optional<SpectralRadiusReport> spectral_radius;

  bool all_pass() const {
    for (const auto& c : certificates)
      if (!c.all_pass()) return false;
    for (const auto& [name, g] : gershgorin)
      if (!g.pass) return false;
    if (spectral_radius && !spectral_radius->pass) return false;
    return true;
  }
};

IterationCertificates certify_iteration(const IterationSnapshot& snap);

// One JSON object per line, one line per bound record.
void dump_certificate(std::ostream& os, const SpectralCertificate& cert);

}  // namespace regipm
