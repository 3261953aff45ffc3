#include "oracles.hpp"

#include "sparse_ridge/errors.hpp"
#include "sparse_ridge/model.hpp"

#include <gtest/gtest.h>

using namespace sridge;

TEST(Dataset, RejectsBadShapesAndValues) {
  EXPECT_THROW(Dataset(Matrix(0, 2), Vector(0)), InvalidArgument);
  EXPECT_THROW(Dataset(Matrix::Ones(3, 2), Vector::Ones(2)), InvalidArgument);
  Matrix x = Matrix::Ones(2, 2);
  x(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Dataset(x, Vector::Ones(2)), InvalidArgument);
  EXPECT_THROW(Dataset(Matrix::Ones(2, 2), Vector::Ones(2), {"a"}), InvalidArgument);
}

TEST(Dataset, NormalizedColumnsHaveSquaredNormN) {
  const auto spec = oracle::random_spec(3, 12, 5, 2, 0.1);
  const Dataset d = spec.data().normalized();
  for (Index j = 0; j < d.p(); ++j) EXPECT_NEAR(d.x().col(j).squaredNorm(), 12.0, 1e-10);
  Matrix x = Matrix::Ones(3, 2);
  x.col(1).setZero();
  EXPECT_EQ(Dataset(x, Vector::Ones(3)).normalized().x().col(1).squaredNorm(), 0.0);
}

TEST(ProblemSpec, ValidatesLambdaAndBudget) {
  Dataset d(Matrix::Identity(2, 3), Vector::Ones(2));
  EXPECT_THROW(ProblemSpec(d, 0.0, 1), InvalidArgument);
  EXPECT_THROW(ProblemSpec(d, -1.0, 1), InvalidArgument);
  EXPECT_THROW(ProblemSpec(d, 0.1, 0), InvalidArgument);
  EXPECT_THROW(ProblemSpec(d, 0.1, 3), InvalidArgument);  // k > min(n, p)
  EXPECT_NO_THROW(ProblemSpec(d, 0.1, 2));
}

TEST(RidgeObjective, ZeroAndWorkedExample) {
  const auto spec = oracle::two_by_two(0.1);
  EXPECT_DOUBLE_EQ(ridge_objective(spec, Vector::Zero(2)), 1.0);
  Vector b(2);
  b << 5.0 / 6.0, 0.0;
  EXPECT_NEAR(ridge_objective(spec, b), 0.1 / 1.2 + 0.5, 1e-12);
  EXPECT_THROW(ridge_objective(spec, Vector::Zero(3)), InvalidArgument);
}

TEST(RidgeObjective, MatchesLoopEvaluation) {
  const auto spec = oracle::random_spec(11, 10, 6, 2, 0.3);
  const SparseEstimator e = restricted_estimator(spec, {1, 3});
  EXPECT_NEAR(ridge_objective(spec, e.beta), oracle::ridge(spec, e.beta), 1e-12);
}

TEST(RestrictedEstimator, WorkedExample) {
  const auto spec = oracle::two_by_two(0.1);
  const SparseEstimator e = restricted_estimator(spec, {0});
  EXPECT_NEAR(e.beta(0), 5.0 / 6.0, 1e-12);
  EXPECT_EQ(e.beta(1), 0.0);
  EXPECT_NEAR(e.objective, 0.583333333333, 1e-9);
  EXPECT_EQ(e.support, Support{0});
}

TEST(RestrictedEstimator, EmptySupportAndBudget) {
  const auto spec = oracle::random_spec(5, 8, 5, 2, 0.2);
  const SparseEstimator e = restricted_estimator(spec, {});
  EXPECT_TRUE(e.beta.isZero());
  EXPECT_NEAR(e.objective, spec.y().squaredNorm() / 8.0, 1e-12);
  EXPECT_THROW(restricted_estimator(spec, {0, 1, 2}), BudgetExceeded);
  EXPECT_THROW(restricted_estimator(spec, {7}), InvalidArgument);
}

TEST(RestrictedEstimator, MatchesGaussianEliminationAndNormalEquations) {
  const auto spec = oracle::random_spec(17, 20, 8, 3, 0.05);
  const Support s{1, 4, 6};
  const SparseEstimator e = restricted_estimator(spec, s);
  const Vector want = oracle::ridge_fit(spec, s);
  for (Index j = 0; j < 8; ++j) EXPECT_NEAR(e.beta(j), want(j), 1e-10);

  Matrix xs(20, 3);
  for (int t = 0; t < 3; ++t) xs.col(t) = spec.x().col(s[t]);
  Vector bs(3);
  for (int t = 0; t < 3; ++t) bs(t) = e.beta(s[t]);
  const Vector rhs = xs.transpose() * spec.y();
  const Vector resid = (xs.transpose() * xs + spec.n_lambda() * Matrix::Identity(3, 3)) * bs - rhs;
  EXPECT_LE(resid.norm(), 1e-10 * rhs.norm());
}

TEST(MicValue, WorkedExampleAndEmptySet) {
  const auto spec = oracle::two_by_two(0.1);
  Vector z(2);
  z << 1, 0;
  EXPECT_NEAR(mic_value(spec, z), 0.583333333333, 1e-9);
  EXPECT_NEAR(mic_value(spec, Vector::Zero(2)), 1.0, 1e-12);
  z << 0.5, 0;
  EXPECT_THROW(mic_value(spec, z), InvalidArgument);
}

TEST(MicValue, RoutesAgreeWithExplicitInverse) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto spec = oracle::random_spec(seed, 6, 10, 3, 0.2);
    for (const Support& s : {Support{}, Support{2}, Support{1, 5}, Support{0, 2, 4, 6, 8, 9, 3}}) {
      const double want = oracle::mic(spec, s);
      EXPECT_NEAR(mic_value(spec, s, MicRoute::ridge_system), want, 1e-10 * (1 + want));
      EXPECT_NEAR(mic_value(spec, s, MicRoute::gram_system), want, 1e-10 * (1 + want));
      EXPECT_NEAR(mic_value(spec, s), want, 1e-10 * (1 + want));
    }
  }
}

TEST(MicValue, EqualsRestrictedFitObjective) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto spec = oracle::random_spec(100 + seed, 15 + seed, 6 + seed % 4, 3, 0.05 * (1 + seed));
    oracle::subsets(spec.p(), 3, [&](const std::vector<Index>& s) {
      const double a = mic_value(spec, s);
      const double b = ridge_objective(spec, restricted_estimator(spec, s).beta);
      EXPECT_NEAR(a, b, 1e-8 * (1 + a));
    });
  }
}

TEST(MicValue, MonotoneUnderInclusion) {
  const auto spec = oracle::random_spec(8, 12, 7, 3, 0.1);
  Support s;
  double prev = mic_value(spec, s);
  for (Index j : {4, 1, 6, 0, 2}) {
    s.push_back(j);
    const double v = mic_value(spec, normalize_support(s, 7));
    EXPECT_LE(v, prev + 1e-10);
    prev = v;
  }
}

TEST(Spectral, IdentityDesign) {
  const auto spec = oracle::two_by_two(0.1);
  EXPECT_DOUBLE_EQ(theta(spec, 1, SpectralMode::exact), 1.0);
  EXPECT_NEAR(theta(spec, 2, SpectralMode::exact), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(theta(spec, 1, SpectralMode::upper_bound), 1.0);
  EXPECT_EQ(theta(spec, 0, SpectralMode::exact), 0.0);
  EXPECT_NEAR(underline_theta(spec), 1.0, 1e-12);
}

TEST(Spectral, ExactThetaMatchesJacobiEnumeration) {
  const auto spec = oracle::random_spec(21, 5, 8, 2, 0.1);
  double want = 0.0;
  oracle::subsets(8, 2, [&](const std::vector<Index>& s) {
    Matrix g(2, 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) g(a, b) = spec.x().col(s[a]).dot(spec.x().col(s[b]));
    want = std::max(want, oracle::jacobi_eigenvalues(g).back());
  });
  EXPECT_NEAR(theta(spec, 2, SpectralMode::exact), want, 1e-10 * want);
}

TEST(Spectral, UpperBoundDominatesAndThetaIsMonotone) {
  const auto spec = oracle::random_spec(4, 6, 7, 4, 0.1);
  const SpectralStats ex = spectral_stats(spec, SpectralMode::exact);
  const SpectralStats ub = spectral_stats(spec, SpectralMode::upper_bound);
  EXPECT_EQ(ex.at(0), 0.0);
  for (Index s = 1; s <= 4; ++s) {
    EXPECT_GE(ex.at(s), ex.at(s - 1) - 1e-12);
    EXPECT_GE(ub.at(s), ex.at(s) - 1e-9);
  }
  EXPECT_EQ(ub.underline_theta, 0.0);
}

TEST(Spectral, UnderlineThetaMatchesEnumeration) {
  // n = 3, p = 6, k = 2: subsets of size 5 and 6.
  const auto spec = oracle::random_spec(31, 3, 6, 2, 0.1);
  double want = std::numeric_limits<double>::infinity();
  for (Index m = 5; m <= 6; ++m) {
    oracle::subsets(6, m, [&](const std::vector<Index>& t) {
      Matrix a = Matrix::Zero(3, 3);
      for (Index i : t) a += spec.x().col(i) * spec.x().col(i).transpose();
      want = std::min(want, oracle::jacobi_eigenvalues(a).front());
    });
  }
  EXPECT_NEAR(underline_theta(spec), want, 1e-9 * (1 + want));
  EXPECT_GT(want, 0.0);

  const auto wide = oracle::random_spec(32, 4, 10, 3, 0.1);
  EXPECT_GE(underline_theta(wide), 0.0);
}

TEST(Spectral, CapIsEnforced) {
  const auto spec = oracle::random_spec(1, 5, 30, 5, 0.1);
  SpectralOptions tiny;
  tiny.enumeration_cap = 100;
  EXPECT_THROW(theta(spec, 3, SpectralMode::exact, tiny), CapExceeded);
  EXPECT_NO_THROW(theta(spec, 3, SpectralMode::upper_bound, tiny));
}

TEST(Binomial, SmallValuesAndSaturation) {
  EXPECT_EQ(binomial(8, 2), 28u);
  EXPECT_EQ(binomial(5, 0), 1u);
  EXPECT_EQ(binomial(3, 5), 0u);
  EXPECT_EQ(binomial(1000, 500), std::numeric_limits<std::uint64_t>::max());
}
