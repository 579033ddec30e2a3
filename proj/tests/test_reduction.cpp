#include "behav/reduction.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace behav;
using namespace behav::testing;

namespace {

void expect_valid(const PolyMatrix& m, const ReducedForm& r) {
  EXPECT_EQ(mat_mul(r.U, m), r.T);
  EXPECT_TRUE(unit_test(det(r.U))) << to_string(det(r.U));
  EXPECT_TRUE(is_staircase(r)) << to_string(r.T);
}

// True when a and b have the same row space via a unimodular W with W b = a.
bool unimodularly_equivalent(const PolyMatrix& a, const ReducedForm& b) {
  auto w = left_quotient(a, b.T, b.pivot_cols);
  if (!w || w->rows() != w->cols()) return false;
  return mat_mul(*w, b.T) == a && unit_test(det(*w));
}

}  // namespace

TEST(Det, Examples) {
  EXPECT_EQ(det(PolyMatrix::identity(3)), LaurentPoly(1));
  EXPECT_EQ(det(PolyMatrix{{s, 0}, {0, s_inv}}), LaurentPoly(1));
  EXPECT_EQ(det(PolyMatrix{{s, 1}, {1, s}}), s * s - 1);
  EXPECT_THROW(det(PolyMatrix(2, 3)), DimensionError);
}

TEST(Det, MultiplicativeOnRandomMatrices) {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const PolyMatrix a = random_matrix(rng, 3, 3), b = random_matrix(rng, 3, 3);
    EXPECT_EQ(det(mat_mul(a, b)), det(a) * det(b));
  }
}

TEST(Reduce, IdentityIsFixed) {
  const ReducedForm r = reduce(PolyMatrix::identity(3));
  EXPECT_EQ(r.U, PolyMatrix::identity(3));
  EXPECT_EQ(r.T, PolyMatrix::identity(3));
  EXPECT_EQ(r.rank, 3u);
}

TEST(Reduce, ZeroMatrix) {
  const ReducedForm r = reduce(PolyMatrix(2, 3));
  EXPECT_EQ(r.rank, 0u);
  EXPECT_EQ(r.U, PolyMatrix::identity(2));
  EXPECT_TRUE(r.T.is_zero());
  EXPECT_EQ(kernel_rank_deficit(PolyMatrix(2, 3)), 3u);
}

TEST(Reduce, TwoByTwoAdjoint) {
  const PolyMatrix m = adjoint(*example2().H);
  const ReducedForm r = reduce(m);
  expect_valid(m, r);
  EXPECT_EQ(r.rank, 2u);
  const PolyMatrix display{{1, s_inv}, {0, LaurentPoly(1) - s_inv - s_inv * s_inv}};
  EXPECT_TRUE(unimodularly_equivalent(display, r));
  EXPECT_EQ(kernel_rank_deficit(m), 0u);
}

TEST(Reduce, SlackAugmented) {
  const PolyMatrix m{{s + 1, 1, 1, 0}, {1, s, 0, 1}};
  const ReducedForm r = reduce(m);
  expect_valid(m, r);
  EXPECT_EQ(r.rank, 2u);
  EXPECT_EQ(r.pivot_cols, (std::vector<std::size_t>{0, 1}));
  const PolyMatrix display{{1, s, 0, 1}, {0, LaurentPoly(1) - s - s * s, 1, -1 - s}};
  EXPECT_TRUE(unimodularly_equivalent(display, r));
  EXPECT_EQ(r.T, display);
  EXPECT_EQ(r.U, (PolyMatrix{{0, 1}, {1, -s - 1}}));
  EXPECT_TRUE(unit_test(det(r.U)));
}

TEST(Reduce, MixedAdjointRank) {
  const BehavioralSystem sys = example4();
  const PolyMatrix dual = sys.dual_operator();
  ASSERT_EQ(dual.rows(), 3u);
  ASSERT_EQ(dual.cols(), 8u);
  EXPECT_EQ(rank(dual), 3u);
  EXPECT_EQ(kernel_rank_deficit(dual), 5u);
}

TEST(Reduce, RandomInvariants) {
  Rng rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rows = static_cast<std::size_t>(rng.uniform(1, 3));
    const auto cols = static_cast<std::size_t>(rng.uniform(1, 4));
    const PolyMatrix m = random_matrix(rng, rows, cols);
    const ReducedForm r = reduce(m);
    expect_valid(m, r);
    EXPECT_EQ(r.rank, rank_by_evaluation(m)) << to_string(m);
    const PolyMatrix v = random_unimodular(rng, rows);
    EXPECT_EQ(rank(mat_mul(v, m)), r.rank);
    EXPECT_EQ(rank(adjoint(m)), r.rank);
  }
}

TEST(Reduce, RankDeficientInputs) {
  // second row is (s - 1) times the first
  const PolyMatrix m{{s, 1 + s_inv}, {s * s - s, s - 1 - s_inv + 1}};
  const ReducedForm r = reduce(m);
  expect_valid(m, r);
  EXPECT_EQ(r.rank, 1u);
  EXPECT_EQ(r.rank, rank_by_evaluation(m));
}

TEST(Reduce, FullColumnRankAdjointHasTrivialKernel) {
  const PolyMatrix dual = adjoint(*example2().H);
  ASSERT_EQ(kernel_rank_deficit(dual), 0u);
  Rng rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const Trajectory y = random_finite(rng, 2);
    const Trajectory image = apply(dual, y);
    bool all_zero = true;
    for (const auto& v : image.values())
      for (const auto& x : v) all_zero &= x == 0;
    bool y_zero = true;
    for (const auto& v : y.values())
      for (const auto& x : v) y_zero &= x == 0;
    EXPECT_EQ(all_zero, y_zero);
  }
}

TEST(LeftQuotient, RejectsDifferentRowSpace) {
  const PolyMatrix m{{1, 0}, {0, s + 1}};
  const ReducedForm r = reduce(m);
  EXPECT_FALSE(left_quotient(PolyMatrix{{0, 1}}, r.T, r.pivot_cols).has_value());
}
