#include "oracles.hpp"

#include "sparse_ridge/errors.hpp"
#include "sparse_ridge/exact.hpp"
#include "sparse_ridge/relaxation.hpp"

#include <gtest/gtest.h>

using namespace sridge;

TEST(BruteForce, WorkedExampleTie) {
  const auto spec = oracle::two_by_two(0.1);
  const SparseEstimator e = brute_force(spec);
  EXPECT_EQ(e.support, Support{0});
  EXPECT_NEAR(e.objective, 0.1 / 1.2 + 0.5, 1e-12);
}

TEST(BruteForce, FullBudget) {
  const auto spec = oracle::random_spec(1, 10, 4, 4, 0.2);
  const SparseEstimator e = brute_force(spec);
  EXPECT_EQ(e.support, (Support{0, 1, 2, 3}));
  EXPECT_NEAR(e.objective, oracle::ridge(spec, oracle::ridge_fit(spec, {0, 1, 2, 3})), 1e-10);
}

TEST(BruteForce, MatchesExplicitEnumeration) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto spec = oracle::random_spec(10 + seed, 15, 8, 3, 0.1);
    const auto best = oracle::best_subset(spec);
    const SparseEstimator e = brute_force(spec);
    EXPECT_NEAR(e.objective, best.value, 1e-10);
    EXPECT_EQ(e.support, Support(best.support.begin(), best.support.end()));
  }
}

TEST(BruteForce, BeatsRandomSubsets) {
  const auto spec = oracle::random_spec(20, 20, 12, 4, 0.1);
  const SparseEstimator e = brute_force(spec);
  std::mt19937 rng(1);
  for (int t = 0; t < 50; ++t) {
    std::vector<Index> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    perm.resize(4);
    std::sort(perm.begin(), perm.end());
    EXPECT_LE(e.objective, oracle::mic(spec, perm) + 1e-12);
  }
}

TEST(BruteForce, CapIsEnforced) {
  const auto spec = oracle::random_spec(2, 12, 40, 10, 0.1);
  EXPECT_THROW(brute_force(spec), CapExceeded);
  EXPECT_THROW(brute_force(spec.with_k(2), BruteForceOptions{100}), CapExceeded);
}

TEST(BranchAndBound, WorkedExample) {
  const auto spec = oracle::two_by_two(0.1);
  const BnbResult r = branch_and_bound(spec);
  EXPECT_NEAR(r.root_bound, 0.4 / 1.4, 1e-8);
  EXPECT_NEAR(r.value, 0.1 / 1.2 + 0.5, 1e-12);
  EXPECT_EQ(r.estimator.support, Support{0});
  EXPECT_TRUE(r.proven);
  EXPECT_LE(r.gap, 1e-6);
  EXPECT_EQ(r.nodes, 3);  // root plus both children of z_1
}

TEST(BranchAndBound, IntegralRootNeedsNoBranching) {
  // Orthogonal design with one dominant feature: the relaxation is integral.
  Matrix x = Matrix::Zero(4, 3);
  x(0, 0) = 2.0;
  x(1, 1) = 2.0;
  x(2, 2) = 2.0;
  Vector y(4);
  y << 5.0, 0.0, 0.0, 1.0;
  const ProblemSpec spec(Dataset(x, y), 0.1, 1);
  const BnbResult r = branch_and_bound(spec);
  EXPECT_EQ(r.nodes, 1);
  EXPECT_NEAR(r.value, r.root_bound, 1e-8);
  EXPECT_EQ(r.estimator.support, Support{0});
}

TEST(BranchAndBound, MatchesBruteForceUpToFourteenFeatures) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Index p = 8 + static_cast<Index>(seed);
    const auto spec = oracle::random_spec(30 + seed, 20, p, 4, 0.02 + 0.05 * seed);
    const SparseEstimator bf = brute_force(spec);
    const BnbResult r = branch_and_bound(spec);
    EXPECT_TRUE(r.proven);
    EXPECT_LE(std::abs(r.value - bf.objective), 1e-6 * bf.objective);
    EXPECT_NEAR(r.root_bound, solve_v4(spec).value, 1e-6 * (1 + r.root_bound));
  }
  const auto spec = oracle::random_spec(99, 20, 14, 4, 0.05);
  const BnbResult r = branch_and_bound(spec);
  EXPECT_LE(std::abs(r.value - brute_force(spec).objective), 1e-6 * r.value);
}

TEST(BranchAndBound, NodeBoundsAreValid) {
  const auto spec = oracle::random_spec(40, 12, 9, 3, 0.05);
  int checked = 0;
  branch_and_bound(spec, {}, [&](const BnbNode& node) {
    // Best completion of the node by enumeration.
    std::vector<Index> free;
    for (Index i = 0; i < 9; ++i) {
      const bool fixed = std::binary_search(node.fixed_one.begin(), node.fixed_one.end(), i) ||
                         std::binary_search(node.fixed_zero.begin(), node.fixed_zero.end(), i);
      if (!fixed) free.push_back(i);
    }
    const Index budget = 3 - static_cast<Index>(node.fixed_one.size());
    const Index take = std::min<Index>(budget, static_cast<Index>(free.size()));
    double best = std::numeric_limits<double>::infinity();
    oracle::subsets(static_cast<Index>(free.size()), take, [&](const std::vector<Index>& pick) {
      std::vector<Index> s(node.fixed_one.begin(), node.fixed_one.end());
      for (Index t : pick) s.push_back(free[static_cast<std::size_t>(t)]);
      std::sort(s.begin(), s.end());
      best = std::min(best, oracle::mic(spec, s));
    });
    EXPECT_LE(node.lower_bound, best + 1e-9);
    ++checked;
  });
  EXPECT_GT(checked, 0);
}

TEST(BranchAndBound, NodeCapReportsOpenGap) {
  const auto spec = oracle::random_spec(41, 20, 14, 5, 0.01);
  BnbOptions opts;
  opts.node_cap = 1;
  const BnbResult r = branch_and_bound(spec, opts);
  EXPECT_EQ(r.nodes, 1);
  if (!r.proven) {
    EXPECT_GT(r.gap, opts.gap_tol);
  }
  EXPECT_LE(r.lower_bound, r.value + 1e-12);
  EXPECT_LE(static_cast<Index>(r.estimator.support.size()), 5);
}
