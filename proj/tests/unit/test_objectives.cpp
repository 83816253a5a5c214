#include "dclust/error.hpp"
#include "dclust/kernels.hpp"
#include "dclust/models.hpp"
#include "dclust/objectives.hpp"
#include "dclust/rng.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dclust;

namespace {

Matrix random_responsibilities(Eigen::Index n, Eigen::Index K, Rng& rng, double spread = 2.0) {
  Matrix Z(n, K);
  for (Eigen::Index i = 0; i < Z.size(); ++i) Z.data()[i] = spread * rng.normal();
  return softmax_rows(Z);
}

}  // namespace

TEST(Proportions, Examples) {
  Matrix P(3, 2);
  P << 1, 0, 0, 1, 0, 1;
  const Vector p = proportions(P);
  EXPECT_NEAR(p(0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p(1), 2.0 / 3.0, 1e-15);
  Rng rng(0);
  EXPECT_NEAR(proportions(random_responsibilities(50, 4, rng)).sum(), 1.0, 1e-12);
}

TEST(MutualInformation, DerivedExample) {
  Matrix P(4, 2);
  P << 0.9, 0.1, 0.8, 0.2, 0.2, 0.8, 0.1, 0.9;
  EXPECT_NEAR(mutual_information(P).value, 0.2804044820951273, 1e-12);
}

TEST(MutualInformation, BalancedOneHotIsLog2) {
  Matrix P(4, 2);
  P << 1, 0, 1, 0, 0, 1, 0, 1;
  EXPECT_NEAR(mutual_information(P).value, std::log(2.0), 1e-9);
}

TEST(MutualInformation, ConstantRowsAreZero) {
  Matrix P(5, 3);
  P.rowwise() = RowVector::LinSpaced(3, 0.2, 0.4) / 0.9;
  EXPECT_NEAR(mutual_information(P).value, 0.0, 1e-12);
}

TEST(MutualInformation, BoundsOnRandomInstances) {
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_index(20));
    const Eigen::Index K = 2 + static_cast<Eigen::Index>(rng.uniform_index(5));
    const Matrix P = random_responsibilities(n, K, rng, 4.0);
    const double mi = mutual_information(P).value;
    ASSERT_GE(mi, -1e-12);
    ASSERT_LE(mi, std::min(std::log(static_cast<double>(K)), std::log(static_cast<double>(n))) + 1e-12);
    ASSERT_NEAR(mi, oracle::mi_plugin(P), 1e-12);
  }
}

TEST(MutualInformation, GradientMatchesFiniteDifferences) {
  Rng rng(2);
  const Matrix P = random_responsibilities(7, 3, rng);
  const Matrix numeric = oracle::numeric_gradient(
      [](const Matrix& Q) { return oracle::mi_plugin(Q); }, P, 1e-7);
  EXPECT_LT(oracle::max_rel_error(mutual_information(P).dP, numeric), 1e-6);
}

TEST(FairnessFirmness, IdentityOnRandomInstances) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const Matrix P = random_responsibilities(30, 4, rng);
    const auto e = fairness_firmness(P);
    ASSERT_NEAR(e.marginal - e.conditional, mutual_information(P).value, 1e-9);
  }
}

TEST(FairnessFirmness, Examples) {
  Matrix U = Matrix::Constant(6, 3, 1.0 / 3.0);
  auto e = fairness_firmness(U);
  EXPECT_NEAR(e.marginal, std::log(3.0), 1e-12);
  EXPECT_NEAR(e.conditional, std::log(3.0), 1e-12);
  Matrix H(4, 2);
  H << 1, 0, 0, 1, 1, 0, 0, 1;
  e = fairness_firmness(H);
  EXPECT_NEAR(e.marginal, std::log(2.0), 1e-12);
  EXPECT_EQ(e.conditional, 0.0);
}

TEST(RegularizedMi, PenaltyAndGradient) {
  Rng rng(4);
  const Matrix P = random_responsibilities(10, 2, rng);
  Vector w(3);
  w << 1.0, -2.0, 0.5;
  const double mi = mutual_information(P).value;
  EXPECT_DOUBLE_EQ(regularized_mi(P, w, 0.0).value, mi);
  const double pen1 = mi - regularized_mi(P, w, 0.1).value;
  const double pen2 = mi - regularized_mi(P, w, 0.2).value;
  EXPECT_NEAR(pen1, 0.1 * 5.25, 1e-12);
  EXPECT_NEAR(pen2, 2.0 * pen1, 1e-12);
  const auto r = regularized_mi(P, w, 0.1);
  ASSERT_TRUE(r.dparams_extra.has_value());
  EXPECT_LT((*r.dparams_extra + 0.2 * w).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(regularized_mi(P, w, -1.0), ParameterError);
}

TEST(MmdGemini, OneHotLinearHandCase) {
  Matrix X(2, 1);
  X << -1, 1;
  Matrix P(2, 2);
  P << 1, 0, 0, 1;
  const auto K = gram(X, X, KernelSpec::linear());
  EXPECT_NEAR(mmd_gemini_ova(P, K).value, 1.0, 1e-12);
}

TEST(MmdGemini, IdenticalRowsGiveZero) {
  Matrix X = Matrix::Random(6, 2);
  Matrix P = Matrix::Constant(6, 3, 1.0 / 3.0);
  // sqrt of a rounding-level quadratic form
  EXPECT_NEAR(mmd_gemini_ova(P, gram(X, X, KernelSpec::rbf(1.0))).value, 0.0, 1e-7);
}

TEST(MmdGemini, MatchesLoopOracleAndFiniteDifferences) {
  Rng rng(5);
  Matrix X(6, 2);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
  for (const auto& spec : {KernelSpec::linear(), KernelSpec::rbf(0.8)}) {
    SCOPED_TRACE(to_string(spec.kind));
    const auto K = gram(X, X, spec);
    const Matrix P = random_responsibilities(6, 3, rng);
    const auto v = mmd_gemini_ova(P, K);
    EXPECT_NEAR(v.value, oracle::mmd_gemini_plugin(P, K.values), 1e-12);
    const Matrix numeric = oracle::numeric_gradient(
        [&](const Matrix& Q) { return oracle::mmd_gemini_plugin(Q, K.values); }, P, 1e-6);
    EXPECT_LT(oracle::max_rel_error(v.dP, numeric), 1e-4);
  }
}

TEST(MmdGemini, EmptyClusterContributesNothing) {
  Matrix X = Matrix::Random(4, 2);
  Matrix P(4, 3);
  P << 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0;
  const auto v = mmd_gemini_ova(P, gram(X, X, KernelSpec::rbf(1.0)));
  EXPECT_TRUE(v.dP.allFinite());
  EXPECT_TRUE(v.dP.col(2).isZero());
}

TEST(MmdGemini, KernelShapeMismatch) {
  Matrix X = Matrix::Random(5, 2);
  EXPECT_THROW(mmd_gemini_ova(Matrix::Constant(4, 2, 0.5), gram(X, X, KernelSpec::linear())),
               DimensionError);
}

TEST(ObjectiveKind, StringRoundTrip) {
  for (auto k : {ObjectiveKind::mi, ObjectiveKind::rim, ObjectiveKind::mmd_gemini})
    EXPECT_EQ(objective_kind_from_string(to_string(k)), k);
  EXPECT_EQ(to_string(ObjectiveKind::mmd_gemini), "mmd-gemini");
}
