#include "dclust/baselines.hpp"
#include "dclust/data.hpp"
#include "dclust/error.hpp"
#include "dclust/kernels.hpp"
#include "dclust/metrics.hpp"
#include "dclust/rng.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace dclust;

TEST(KMeans, OneDimensionalHandCase) {
  Matrix X(4, 1);
  X << 0, 1, 10, 11;
  Rng rng(0);
  const auto r = kmeans(X, {}, rng);
  EXPECT_NEAR(r.inertia, 1.0, 1e-12);
  std::vector<double> c{r.centroids(0, 0), r.centroids(1, 0)};
  std::sort(c.begin(), c.end());
  EXPECT_NEAR(c[0], 0.5, 1e-12);
  EXPECT_NEAR(c[1], 10.5, 1e-12);
  EXPECT_EQ(r.partition.labels[0], r.partition.labels[1]);
  EXPECT_NE(r.partition.labels[1], r.partition.labels[2]);
}

TEST(KMeans, InertiaMatchesOracleAndTraceIsMonotone) {
  Rng data(3);
  Matrix X(120, 3);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = data.normal();
  Rng rng(1);
  KMeansOptions opt;
  opt.clusters = 4;
  const auto r = kmeans(X, opt, rng);
  EXPECT_NEAR(r.inertia, oracle::centroid_inertia(X, r.partition.labels, 4), 1e-9);
  for (std::size_t i = 1; i < r.inertia_trace.size(); ++i)
    EXPECT_LE(r.inertia_trace[i], r.inertia_trace[i - 1] + 1e-9);
  EXPECT_EQ(assign_to_centroids(X, r.centroids), r.partition.labels);
}

TEST(KMeans, DeterministicForSeed) {
  Rng data(2);
  const auto D = make_circles(100, 0.05, 0.5, data);
  Rng a(7), b(7);
  EXPECT_EQ(kmeans(D.values, {}, a).partition.labels, kmeans(D.values, {}, b).partition.labels);
}

TEST(KMeans, RejectsBadOptions) {
  Rng rng(0);
  KMeansOptions opt;
  opt.clusters = 5;
  EXPECT_THROW(kmeans(Matrix::Zero(3, 2), opt, rng), ParameterError);
  opt.clusters = 0;
  EXPECT_THROW(kmeans(Matrix::Zero(3, 2), opt, rng), ParameterError);
}

TEST(KernelKMeansScore, LinearKernelInertiaIdentity) {
  // With a linear kernel, inertia = trace(K) + score.
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = 6 + static_cast<Eigen::Index>(rng.uniform_index(20));
    const int K = 2 + static_cast<int>(rng.uniform_index(3));
    Matrix X(n, 2);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
    Partition part;
    part.clusters = K;
    part.labels.resize(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < part.labels.size(); ++i)
      part.labels[i] = i < static_cast<std::size_t>(K) ? static_cast<int>(i)
                                                       : static_cast<int>(rng.uniform_index(K));
    const auto G = gram(X, X, KernelSpec::linear());
    ASSERT_NEAR(oracle::centroid_inertia(X, part.labels, K),
                G.values.trace() + kernel_kmeans_score(part, G), 1e-9);
  }
}

TEST(KernelKMeansScore, EmptyClusterThrows) {
  Matrix X = Matrix::Random(3, 2);
  Partition part{{0, 0, 0}, 2};
  EXPECT_THROW(kernel_kmeans_score(part, gram(X, X, KernelSpec::linear())), DegenerateInputError);
}

TEST(Spectral, SeparatesCirclesAndSpectrumInRange) {
  Rng data(0);
  const auto D = standardize(make_circles(200, 0.05, 0.1, data));
  Rng rng(0);
  const auto r = spectral(D.values, 2, KernelSpec::rbf(1.0), rng);
  EXPECT_DOUBLE_EQ(adjusted_rand_index(r.partition.labels, *D.labels), 1.0);
  EXPECT_GT(r.eigenvalues.minCoeff(), -1e-9);
  EXPECT_LT(r.eigenvalues.maxCoeff(), 2.0 + 1e-9);
  EXPECT_NEAR(r.eigenvalues(0), 0.0, 1e-9);
  for (Eigen::Index i = 0; i < r.embedding.rows(); ++i) EXPECT_NEAR(r.embedding.row(i).norm(), 1.0, 1e-12);
}

TEST(Spectral, IsolatedVertexIsDegenerate) {
  // The zero row has no linear affinity to anything.
  Matrix X(3, 1);
  X << 0, 1, 2;
  Rng rng(0);
  EXPECT_THROW(spectral(X, 2, KernelSpec::linear(), rng), DegenerateInputError);
}

TEST(Partition, Validate) {
  EXPECT_NO_THROW((Partition{{0, 1, 1}, 2}.validate()));
  EXPECT_THROW((Partition{{0, 2}, 2}.validate()), ParameterError);
}
