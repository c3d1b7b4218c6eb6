#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "subclonal/assignment.hpp"
#include "subclonal/rng.hpp"

using namespace subclonal;

namespace {

std::int64_t brute_force(const Matrix<std::int64_t>& cost, std::vector<int>* best_perm = nullptr) {
  std::vector<int> perm(cost.rows());
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  do {
    std::int64_t total = 0;
    for (std::size_t r = 0; r < perm.size(); ++r) total += cost(r, static_cast<std::size_t>(perm[r]));
    if (total < best) {
      best = total;
      if (best_perm) *best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Matrix<std::int64_t> random_costs(std::size_t n, int hi, Rng& rng) {
  Matrix<std::int64_t> m(n, n);
  for (auto& v : m.values()) v = rng.uniform_int(0, hi);
  return m;
}

}  // namespace

TEST(Assignment, MatchesExhaustiveSearch) {
  Rng rng(60);
  for (std::size_t n = 1; n <= 7; ++n)
    for (int rep = 0; rep < 60; ++rep) {
      const auto cost = random_costs(n, rep % 2 ? 5 : 1000, rng);
      const auto got = solve_assignment(cost);
      EXPECT_EQ(got.total, brute_force(cost));
      std::int64_t check = 0;
      for (std::size_t r = 0; r < n; ++r) check += cost(r, static_cast<std::size_t>(got.perm[r]));
      EXPECT_EQ(check, got.total);
    }
}

TEST(Assignment, LexminPicksFirstOptimalPermutation) {
  // next_permutation visits permutations in lexicographic order and the
  // strict < keeps the first optimum.
  Rng rng(61);
  for (std::size_t n = 2; n <= 6; ++n)
    for (int rep = 0; rep < 80; ++rep) {
      const auto cost = random_costs(n, 2, rng);
      std::vector<int> expect;
      const auto best = brute_force(cost, &expect);
      const auto got = solve_assignment_lexmin(cost);
      EXPECT_EQ(got.total, best);
      EXPECT_EQ(got.perm, expect);
    }
}

TEST(Assignment, RealCosts) {
  RealMatrix cost(3, 3);
  const double v[] = {0.5, 2.0, 1.0, 1.5, 0.25, 3.0, 2.0, 2.0, 0.125};
  std::copy(v, v + 9, cost.values().begin());
  const auto got = solve_assignment(cost);
  EXPECT_DOUBLE_EQ(got.total, 0.875);
  EXPECT_EQ(got.perm, (std::vector<int>{0, 1, 2}));
}

TEST(Assignment, AllZeroIsIdentityUnderLexmin) {
  const Matrix<std::int64_t> cost(5, 5, 0);
  EXPECT_EQ(solve_assignment_lexmin(cost).perm, (std::vector<int>{0, 1, 2, 3, 4}));
}
