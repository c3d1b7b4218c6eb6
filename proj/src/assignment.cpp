#include "subclonal/assignment.hpp"

#include <algorithm>
#include <limits>

#include "subclonal/errors.hpp"

namespace subclonal {

namespace {

template <typename Cost>
Assignment<Cost> hungarian(const Matrix<Cost>& a) {
  if (a.rows() != a.cols()) throw StructuralError("assignment needs a square cost matrix");
  const std::size_t n = a.rows();
  Assignment<Cost> out;
  out.perm.assign(n, -1);
  if (n == 0) return out;

  // Potentials u (rows) and v (columns), 1-based with a virtual column 0.
  const Cost inf = std::numeric_limits<Cost>::max() / 4;
  std::vector<Cost> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      Cost delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const Cost cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  out.total = Cost{};
  for (std::size_t j = 1; j <= n; ++j) out.perm[match[j] - 1] = static_cast<int>(j - 1);
  for (std::size_t i = 0; i < n; ++i) out.total += a(i, static_cast<std::size_t>(out.perm[i]));
  return out;
}

}  // namespace

Assignment<std::int64_t> solve_assignment(const Matrix<std::int64_t>& cost) { return hungarian(cost); }

Assignment<double> solve_assignment(const RealMatrix& cost) { return hungarian(cost); }

Assignment<std::int64_t> solve_assignment_lexmin(const Matrix<std::int64_t>& cost) {
  const std::size_t n = cost.rows();
  const Assignment<std::int64_t> best = hungarian(cost);
  Assignment<std::int64_t> out;
  out.total = best.total;
  out.perm.assign(n, -1);
  std::vector<char> taken(n, 0);
  std::int64_t fixed_cost = 0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < n; ++j) {
      if (taken[j]) continue;
      // Optimal completion of rows r+1.. over the still-free columns.
      const std::size_t rest = n - r - 1;
      Matrix<std::int64_t> sub(rest, rest);
      for (std::size_t i = 0, col = 0; i < n; ++i) {
        if (taken[i] || i == j) continue;
        for (std::size_t k = 0; k < rest; ++k) sub(k, col) = cost(r + 1 + k, i);
        ++col;
      }
      const std::int64_t completion = hungarian(sub).total;
      if (fixed_cost + cost(r, j) + completion == best.total) {
        out.perm[r] = static_cast<int>(j);
        taken[j] = 1;
        fixed_cost += cost(r, j);
        break;
      }
    }
  }
  return out;
}

}  // namespace subclonal
