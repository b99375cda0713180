#include "regipm/ordering.hpp"

#include <algorithm>
#include <numeric>

namespace regipm {

std::vector<int> identity_order(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

std::vector<int> min_degree_order(const SparseMatrix& pattern) {
  if (pattern.rows() != pattern.cols())
    throw std::invalid_argument("min_degree_order: matrix not square");
  const int n = pattern.rows();
  std::vector<std::vector<int>> adj(n);
  for (int c = 0; c < n; ++c)
    for (int p = pattern.col_begin(c); p < pattern.col_end(c); ++p) {
      int r = pattern.row_index(p);
      if (r == c) continue;
      adj[r].push_back(c);
      adj[c].push_back(r);
    }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  std::vector<char> eliminated(n, 0);
  std::vector<int> order;
  order.reserve(n);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    std::size_t best_deg = 0;
    for (int v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      if (best == -1 || adj[v].size() < best_deg) {
        best = v;
        best_deg = adj[v].size();
      }
    }
    order.push_back(best);
    eliminated[best] = 1;
    // Fill: the neighbours of the eliminated node become a clique.
    std::vector<int> nbrs;
    nbrs.reserve(adj[best].size());
    for (int u : adj[best])
      if (!eliminated[u]) nbrs.push_back(u);
    for (int u : nbrs) {
      auto& au = adj[u];
      std::vector<int> merged;
      merged.reserve(au.size() + nbrs.size());
      std::set_union(au.begin(), au.end(), nbrs.begin(), nbrs.end(), std::back_inserter(merged));
      merged.erase(std::remove_if(merged.begin(), merged.end(),
                                  [&](int w) { return w == u || eliminated[w]; }),
                   merged.end());
      au = std::move(merged);
    }
    adj[best].clear();
    adj[best].shrink_to_fit();
  }
  return order;
}

}  // namespace regipm
