#pragma once

#include <cstdint>
#include <vector>

#include "subclonal/matrix.hpp"

namespace subclonal {

template <typename Cost>
struct Assignment {
  Cost total{};
  std::vector<int> perm;  // perm[row] = assigned column
};

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method,
/// O(n^3)). Integer costs are solved exactly.
Assignment<std::int64_t> solve_assignment(const Matrix<std::int64_t>& cost);
Assignment<double> solve_assignment(const RealMatrix& cost);

/// Among all optimal matchings, the one whose permutation is lexicographically
/// smallest. Costs O(n^5); intended for small n.
Assignment<std::int64_t> solve_assignment_lexmin(const Matrix<std::int64_t>& cost);

}  // namespace subclonal
