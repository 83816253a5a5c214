#include "dclust/contrastive.hpp"
#include "dclust/error.hpp"
#include "dclust/rng.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace dclust;

namespace {

double info_nce_loop(const Matrix& Z, const Matrix& Za) {
  const Eigen::Index n = Z.rows();
  Matrix S(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      S(i, j) = Z.row(i).dot(Za.row(j)) / (Z.row(i).norm() * Za.row(j).norm());
  double loss = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    double denom = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) denom += std::exp(S(i, j));
    loss -= std::exp(S(j, j)) / denom;
  }
  return loss;
}

}  // namespace

TEST(InfoNce, ClosedFormCase) {
  Matrix Z(2, 2);
  Z << 1, 0, 0, 1;
  const double e = std::numbers::e;
  EXPECT_NEAR(info_nce_loss(Z, Z).loss, -2.0 * e / (e + 1.0), 1e-9);
}

TEST(InfoNce, CosineRescaleInvariance) {
  Rng rng(1);
  Matrix Z(6, 3), Za(6, 3);
  for (Eigen::Index i = 0; i < Z.size(); ++i) Z.data()[i] = rng.normal();
  for (Eigen::Index i = 0; i < Za.size(); ++i) Za.data()[i] = rng.normal();
  Matrix Zs = Z;
  for (Eigen::Index i = 0; i < Zs.rows(); ++i) Zs.row(i) *= 0.1 + 3.0 * static_cast<double>(i);
  EXPECT_NEAR(info_nce_loss(Zs, Za * 7.0).loss, info_nce_loss(Z, Za).loss, 1e-10);
  EXPECT_NEAR(info_nce_loss(Z, Za).loss, info_nce_loop(Z, Za), 1e-12);
}

TEST(InfoNce, GradientMatchesFiniteDifferences) {
  Rng rng(2);
  Matrix Z(5, 3), Za(5, 3);
  for (Eigen::Index i = 0; i < Z.size(); ++i) Z.data()[i] = rng.normal();
  for (Eigen::Index i = 0; i < Za.size(); ++i) Za.data()[i] = rng.normal();
  const Matrix numeric =
      oracle::numeric_gradient([&](const Matrix& M) { return info_nce_loop(M, Za); }, Z, 1e-6);
  EXPECT_LT(oracle::max_rel_error(info_nce_loss(Z, Za).dZ, numeric), 1e-6);
}

TEST(InfoNce, ZeroRowIsDegenerate) {
  Matrix Z = Matrix::Identity(2, 2);
  Matrix Za = Z;
  Za.row(1).setZero();
  EXPECT_THROW(info_nce_loss(Z, Za), DegenerateInputError);
  EXPECT_THROW(info_nce_loss(Z, Matrix::Identity(3, 2)), DimensionError);
}

TEST(Augmentation, ParseAndValidate) {
  const auto a = parse_augmentation("noise:0.5");
  ASSERT_TRUE(std::holds_alternative<GaussianNoise>(a));
  EXPECT_EQ(std::get<GaussianNoise>(a).sigma, 0.5);
  const auto b = parse_augmentation("rotation:-3.14:3.14");
  ASSERT_TRUE(std::holds_alternative<Rotation2d>(b));
  EXPECT_EQ(std::get<Rotation2d>(b).lo, -3.14);
  EXPECT_EQ(parse_augmentation(to_string(b)).index(), 1u);
  EXPECT_THROW(parse_augmentation("blur:2"), ParameterError);
  EXPECT_THROW(parse_augmentation("noise:-1"), ParameterError);
  EXPECT_THROW(parse_augmentation("rotation:1:0"), ParameterError);
}

TEST(Augmentation, RotationPreservesNormsAndNeeds2d) {
  Rng rng(3);
  Matrix X = Matrix::Random(10, 2);
  const Matrix R = augment(X, Rotation2d{-3.0, 3.0}, rng);
  for (Eigen::Index i = 0; i < 10; ++i) EXPECT_NEAR(R.row(i).norm(), X.row(i).norm(), 1e-12);
  // A single angle for the whole batch keeps pairwise distances.
  EXPECT_NEAR((R.row(0) - R.row(1)).norm(), (X.row(0) - X.row(1)).norm(), 1e-12);
  EXPECT_THROW(augment(Matrix::Zero(3, 3), Rotation2d{0.0, 1.0}, rng), DimensionError);
}

TEST(Augmentation, ZeroNoiseIsIdentity) {
  Rng rng(4);
  Matrix X = Matrix::Random(5, 2);
  EXPECT_EQ(augment(X, GaussianNoise{0.0}, rng), X);
}

TEST(Critic, InitIsUniformAndSeeded) {
  Rng a(5), b(5);
  const auto c = init_critic(2, 20, 2, a);
  EXPECT_EQ(c.output_dim(), 2);
  EXPECT_LE(c.network.W1.cwiseAbs().maxCoeff(), 1.0 / std::sqrt(2.0));
  EXPECT_LE(c.network.W2.cwiseAbs().maxCoeff(), 1.0 / std::sqrt(20.0));
  EXPECT_EQ(get_params(c.network), get_params(init_critic(2, 20, 2, b).network));
}

TEST(TrainContrastive, ZeroEpochsReturnsCriticUntouched) {
  Rng rng(6);
  const auto c = init_critic(2, 4, 2, rng);
  Matrix X = Matrix::Random(8, 2);
  TrainConfig cfg;
  cfg.epochs = 0;
  const auto r = train_contrastive(c, X, GaussianNoise{0.1}, cfg);
  EXPECT_TRUE(r.history.empty());
  EXPECT_EQ(get_params(r.critic.network), get_params(c.network));
  EXPECT_EQ(r.labels, extract_clusters(c, X));
}

TEST(TrainContrastive, DeterministicAndLossDecreases) {
  Rng rng(7);
  const auto c = init_critic(2, 8, 2, rng);
  Matrix X = Matrix::Random(30, 2);
  TrainConfig cfg;
  cfg.epochs = 300;
  cfg.learning_rate = 1e-2;
  cfg.seed = 3;
  const auto a = train_contrastive(c, X, Rotation2d{-0.5, 0.5}, cfg);
  const auto b = train_contrastive(c, X, Rotation2d{-0.5, 0.5}, cfg);
  EXPECT_EQ(a.history, b.history);
  ASSERT_EQ(a.history.size(), 300u);
  double head = 0.0, tail = 0.0;
  for (int i = 0; i < 20; ++i) {
    head += a.history[static_cast<std::size_t>(i)];
    tail += a.history[a.history.size() - 1 - static_cast<std::size_t>(i)];
  }
  EXPECT_LT(tail, head);
}
