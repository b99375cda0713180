#pragma once

#include <vector>

#include "regipm/sparse.hpp"

namespace regipm {

// Greedy minimum-degree ordering on the pattern of a symmetric matrix.
// Returns perm with new index -> old index. Computed once per solve on the
// full (un-dropped) pattern and reused across iterations.
std::vector<int> min_degree_order(const SparseMatrix& pattern);

std::vector<int> identity_order(int n);

}  // namespace regipm
