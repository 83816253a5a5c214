#include "dclust/error.hpp"
#include "dclust/kernels.hpp"
#include "dclust/metrics.hpp"
#include "dclust/rng.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dclust;

TEST(Ari, HandCases) {
  EXPECT_EQ(adjusted_rand_index(Labels{0, 0, 1, 1}, Labels{0, 1, 0, 1}), -0.5);
  EXPECT_DOUBLE_EQ(adjusted_rand_index(Labels{0, 0, 1, 1}, Labels{1, 1, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(adjusted_rand_index(Labels{0, 0, 0}, Labels{0, 0, 0}), 1.0);
}

TEST(Ari, MatchesPairCountingOracle) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    Labels a(60), b(60);
    for (auto& l : a) l = static_cast<int>(rng.uniform_index(3));
    for (auto& l : b) l = static_cast<int>(rng.uniform_index(4)) * 2;  // non-contiguous ids
    EXPECT_NEAR(adjusted_rand_index(a, b), oracle::ari_pairs(a, b), 1e-12);
  }
}

TEST(Ari, SymmetricAndLabelPermutationInvariant) {
  Labels a{0, 0, 1, 1, 2, 2, 2}, b{1, 0, 1, 2, 2, 0, 2};
  Labels a_perm{5, 5, 3, 3, 0, 0, 0};
  EXPECT_DOUBLE_EQ(adjusted_rand_index(a, b), adjusted_rand_index(b, a));
  EXPECT_NEAR(adjusted_rand_index(a, b), adjusted_rand_index(a_perm, b), 1e-15);
}

TEST(Ari, RejectsBadLabels) {
  EXPECT_THROW(adjusted_rand_index(Labels{0, 1}, Labels{0}), DimensionError);
  EXPECT_THROW(adjusted_rand_index(Labels{0, -1}, Labels{0, 1}), ParameterError);
}

TEST(Contingency, Table) {
  const auto c = contingency(Labels{0, 0, 1, 1}, Labels{0, 1, 1, 1});
  EXPECT_EQ(c.total, 4);
  EXPECT_EQ(c.table(0, 0), 1);
  EXPECT_EQ(c.table(0, 1), 1);
  EXPECT_EQ(c.table(1, 1), 2);
  EXPECT_EQ(c.col_sums(1), 3);
}

TEST(Silhouette, HandCase) {
  Matrix X(4, 1);
  X << 0.0, 0.1, 10.0, 10.1;
  const Labels y{0, 0, 1, 1};
  const auto s = silhouette(X, y);
  EXPECT_NEAR(s.per_sample[0], 0.9901, 1e-4);
  // (10.05 - 0.1) / 10.05 and (9.95 - 0.1) / 9.95
  EXPECT_NEAR(s.per_sample[0], 199.0 / 201.0, 1e-12);
  EXPECT_NEAR(s.per_sample[1], 197.0 / 199.0, 1e-12);
  EXPECT_NEAR(s.per_sample[3], 199.0 / 201.0, 1e-12);
  EXPECT_NEAR(s.mean, 0.5 * (199.0 / 201.0 + 197.0 / 199.0), 1e-12);
}

TEST(Silhouette, MatchesLoopOracle) {
  Rng rng(8);
  Matrix X(40, 2);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
  Labels y(40);
  for (auto& l : y) l = static_cast<int>(rng.uniform_index(3));
  y[0] = 2;
  y[1] = 2;
  const auto s = silhouette(X, y);
  const auto ref = oracle::silhouette_loop(X, y);
  double mean = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    EXPECT_NEAR(s.per_sample[i], ref[i], 1e-10);
    mean += ref[i];
  }
  EXPECT_NEAR(s.mean, mean / 40.0, 1e-10);
}

TEST(Silhouette, SingletonScoresZero) {
  Matrix X(3, 1);
  X << 0.0, 1.0, 5.0;
  const auto s = silhouette(X, Labels{0, 0, 1});
  EXPECT_EQ(s.per_sample[2], 0.0);
}

TEST(Silhouette, NeedsTwoClusters) {
  Matrix X = Matrix::Random(4, 2);
  EXPECT_THROW(silhouette(X, Labels{0, 0, 0, 0}), DegenerateInputError);
}

TEST(Silhouette, PrecomputedAgreesWithEuclidean) {
  Matrix X = Matrix::Random(25, 3);
  Labels y(25);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<int>(i % 3);
  const Matrix D = pairwise_sq_dist(X, X).cwiseSqrt();
  EXPECT_NEAR(silhouette_precomputed(D, y).mean, silhouette(X, y).mean, 1e-12);
}

TEST(Silhouette, AlwaysInRange) {
  Rng rng(10);
  for (int t = 0; t < 50; ++t) {
    Matrix X(15, 2);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
    Labels y(15);
    for (auto& l : y) l = static_cast<int>(rng.uniform_index(3));
    y[0] = 0;
    y[1] = 1;
    for (double v : silhouette(X, y).per_sample) {
      ASSERT_GE(v, -1.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(CountClusters, Distinct) {
  EXPECT_EQ(count_clusters(Labels{3, 3, 7, 0}), 3);
  EXPECT_EQ(count_clusters(Labels{}), 0);
}
