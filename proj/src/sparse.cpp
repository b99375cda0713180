#include "regipm/sparse.hpp"

#include <cmath>
#include <random>

namespace regipm {

double two_norm_estimate(const SparseMatrix& A, int iters, double tol) {
  if (iters < 1) throw std::invalid_argument("two_norm_estimate: iters must be >= 1");
  if (A.nnz() == 0) return 0.0;
  const SparseMatrix work = A.symmetry() == Symmetry::SymmetricLower ? A.expand_symmetric() : A;
  std::mt19937 rng(0x5eed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(work.cols());
  for (double& x : v) x = dist(rng);
  double sigma = 0.0;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> w = work.multiply(v);
    std::vector<double> u = work.multiply_transpose(w);
    double norm_u = 0.0;
    for (double x : u) norm_u += x * x;
    norm_u = std::sqrt(norm_u);
    if (norm_u == 0.0) return 0.0;
    double norm_w2 = 0.0;
    for (double x : w) norm_w2 += x * x;
    double norm_v2 = 0.0;
    for (double x : v) norm_v2 += x * x;
    double next = std::sqrt(norm_w2 / norm_v2);
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] / norm_u;
    if (it > 0 && std::fabs(next - sigma) <= tol * std::max(next, 1e-300)) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

SparseMatrix permute_symmetric(const SparseMatrix& M, std::span<const int> perm) {
  return permute_symmetric_t(M, perm);
}

}  // namespace regipm
