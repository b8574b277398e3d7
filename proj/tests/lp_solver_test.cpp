#include <gtest/gtest.h>

#include "easytl/lp_solver.hpp"
#include "test_support.hpp"

namespace easytl {
namespace {

using testing::duality_violation;
using testing::feasibility_violation;
using testing::integrality_gap;
using testing::Rng;

RealMatrix costs(std::initializer_list<std::initializer_list<double>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  RealMatrix m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

void expect_valid_optimum(const AnnotationProblem& p, const AnnotationMatrix& m) {
  EXPECT_EQ(feasibility_violation(p, m), "");
  EXPECT_EQ(duality_violation(p, m), "");
  EXPECT_LE(integrality_gap(m.values), 1e-7);
}

TEST(Solve, ZeroCostPerfectMatching) {
  const AnnotationProblem p(costs({{0, 1}, {1, 0}}));
  const AnnotationMatrix m = solve(p);
  EXPECT_EQ(m.values, costs({{1, 0}, {0, 1}}));
  EXPECT_DOUBLE_EQ(m.objective, 0.0);
  expect_valid_optimum(p, m);
}

TEST(Solve, CoverageForcesThirdColumn) {
  const AnnotationProblem p(costs({{0, 0, 0.5}, {1, 1, 0.6}}));
  const AnnotationMatrix m = solve(p);
  EXPECT_EQ(m.values, costs({{1, 1, 0}, {0, 0, 1}}));
  EXPECT_NEAR(m.objective, 0.6, 1e-12);
  EXPECT_NEAR(brute_force_solve(p).objective, 0.6, 1e-12);
  expect_valid_optimum(p, m);
}

TEST(Solve, MultipleOptimaOnlyObjectiveMatters) {
  const AnnotationProblem p(costs({{0, 0, 0}, {1, 1, 1}}));
  const AnnotationMatrix m = solve(p);
  EXPECT_NEAR(m.objective, 1.0, 1e-12);
  EXPECT_NEAR(m.values.row(1).sum(), 1.0, 1e-12);
  expect_valid_optimum(p, m);
}

TEST(Solve, SingleClassTakesEverything) {
  const AnnotationProblem p(costs({{0.3, 0.2, 0.9, 0.1}}));
  const AnnotationMatrix m = solve(p);
  EXPECT_EQ(m.values, RealMatrix::Ones(1, 4));
  EXPECT_NEAR(m.objective, 1.5, 1e-12);
  EXPECT_NEAR(brute_force_solve(p).objective, 1.5, 1e-12);
}

TEST(Solve, TiesPreferLowestClass) {
  // Every column costs the same for both classes; class 1 needs exactly one.
  const AnnotationProblem p(costs({{0.5, 0.5, 0.5, 0.5}, {0.5, 0.5, 0.5, 0.5}}));
  const AnnotationMatrix m = solve(p);
  EXPECT_NEAR(m.values.row(1).sum(), 1.0, 1e-12);
  EXPECT_NEAR(m.values.row(0).sum(), 3.0, 1e-12);
  // Deterministic across calls.
  EXPECT_EQ(solve(p).assignment, m.assignment);
}

TEST(Solve, Infeasible) {
  const AnnotationProblem p(costs({{0}, {1}, {2}}));
  try {
    solve(p);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.num_targets(), 1u);
    EXPECT_EQ(e.num_classes(), 3u);
    EXPECT_NE(std::string(e.what()).find("n_t = 1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("C = 3"), std::string::npos);
  }
}

TEST(AnnotationProblem, RejectsBadCosts) {
  EXPECT_THROW(AnnotationProblem(costs({{0, -1}})), InvalidInputError);
  EXPECT_THROW(AnnotationProblem(costs({{0, std::numeric_limits<double>::quiet_NaN()}})),
               InvalidInputError);
  EXPECT_THROW(AnnotationProblem(costs({{0, std::numeric_limits<double>::infinity()}})),
               InvalidInputError);
  EXPECT_THROW(AnnotationProblem(RealMatrix(0, 3)), InvalidInputError);
}

TEST(BruteForce, Examples) {
  EXPECT_DOUBLE_EQ(brute_force_solve(AnnotationProblem(costs({{0, 1}, {1, 0}}))).objective, 0.0);
}

TEST(BruteForce, CapacityGuard) {
  EXPECT_THROW(brute_force_solve(AnnotationProblem(RealMatrix::Zero(6, 6))), CapacityError);
  EXPECT_THROW(brute_force_solve(AnnotationProblem(RealMatrix::Zero(2, 11))), CapacityError);
  EXPECT_NO_THROW(brute_force_solve(AnnotationProblem(RealMatrix::Zero(5, 10))));
}

TEST(SolveProperty, MatchesBruteForce) {
  Rng rng(2024);
  for (int trial = 0; trial < 600; ++trial) {
    const int c = rng.integer(1, 4);
    const int n = rng.integer(c, 8);
    const AnnotationProblem p(rng.uniform_matrix(c, n));
    const AnnotationMatrix fast = solve(p);
    const AnnotationMatrix oracle = brute_force_solve(p);
    ASSERT_NEAR(fast.objective, oracle.objective, 1e-6) << "trial " << trial;
    expect_valid_optimum(p, fast);
  }
}

TEST(SolveProperty, TiedCostsStillOptimal) {
  // Costs on a coarse grid produce many degenerate ties.
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const int c = rng.integer(1, 4);
    const int n = rng.integer(c, 8);
    RealMatrix d(c, n);
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = rng.integer(0, 2);
    const AnnotationProblem p(d);
    const AnnotationMatrix m = solve(p);
    ASSERT_NEAR(m.objective, brute_force_solve(p).objective, 1e-9) << "trial " << trial;
    expect_valid_optimum(p, m);
  }
}

TEST(SolveProperty, ScaleCovariance) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int c = rng.integer(1, 6);
    const int n = rng.integer(c, 30);
    const RealMatrix d = rng.uniform_matrix(c, n);
    const double alpha = rng.uniform(0.01, 100.0);
    const AnnotationProblem p(d);
    const AnnotationProblem scaled(alpha * d);
    const AnnotationMatrix m = solve(p);
    const AnnotationMatrix ms = solve(scaled);
    EXPECT_NEAR(ms.objective, alpha * m.objective, 1e-9 * std::max(1.0, ms.objective));
    // The optimum of one is optimal for the other.
    EXPECT_NEAR((alpha * d.array() * m.values.array()).sum(), ms.objective,
                1e-9 * std::max(1.0, ms.objective));
  }
}

TEST(SolveProperty, LargeInstancesCertifiedByDuality) {
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const int c = rng.integer(1, 30);
    const int n = rng.integer(c, 300);
    const AnnotationProblem p(rng.uniform_matrix(c, n, 0.0, 50.0));
    expect_valid_optimum(p, solve(p));
  }
}

TEST(SolveProperty, AlwaysFeasibleWhenEnoughTargets) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int c = rng.integer(1, 10);
    const int n = rng.integer(c, c + 5);
    const AnnotationProblem p(rng.uniform_matrix(c, n));
    EXPECT_NO_THROW(solve(p));
  }
}

}  // namespace
}  // namespace easytl
