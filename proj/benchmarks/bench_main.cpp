#include "dclust/dclust.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

using namespace dclust;

namespace {

Matrix circles(std::size_t n) {
  Rng rng(0);
  return standardize(make_circles(n, 0.05, 0.1, rng)).values;
}

Matrix random_responsibilities(Eigen::Index n, Eigen::Index K) {
  Rng rng(1);
  Matrix Z(n, K);
  for (Eigen::Index i = 0; i < Z.size(); ++i) Z.data()[i] = rng.normal();
  return softmax_rows(Z);
}

void BM_GramRbf(benchmark::State& state) {
  const Matrix X = circles(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gram(X, X, KernelSpec::rbf(0.5)).values.data());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GramRbf)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);

void BM_MutualInformation(benchmark::State& state) {
  const Matrix P = random_responsibilities(state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(mutual_information(P).value);
}
BENCHMARK(BM_MutualInformation)->Arg(200)->Arg(2000);

void BM_MmdGemini(benchmark::State& state) {
  const Matrix X = circles(static_cast<std::size_t>(state.range(0)));
  const auto K = gram(X, X, KernelSpec::rbf(0.5));
  const Matrix P = random_responsibilities(X.rows(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(mmd_gemini_ova(P, K).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MmdGemini)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);

// One objective + gradient evaluation, i.e. the cost of a training epoch.
void BM_Epoch(benchmark::State& state) {
  const Matrix X = circles(200);
  const auto kind = static_cast<ModelKind>(state.range(0));
  const auto objective = static_cast<ObjectiveKind>(state.range(1));
  Rng rng(2);
  InitOptions init;
  init.kernel = KernelSpec::rbf(0.5);
  const Model m = init_model(kind, X, init, rng);
  TrainConfig cfg;
  cfg.objective = objective;
  if (objective == ObjectiveKind::mmd_gemini) cfg.kernel = KernelKind::rbf;
  const ObjectiveFunction fn(X, cfg);
  Vector grad;
  for (auto _ : state) benchmark::DoNotOptimize(fn.evaluate(m, &grad));
  state.SetLabel(to_string(kind) + "/" + to_string(objective));
}
BENCHMARK(BM_Epoch)->ArgsProduct({{0, 1, 2, 3}, {0, 2}});

void BM_KMeans(benchmark::State& state) {
  const Matrix X = circles(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    Rng rng(3);
    benchmark::DoNotOptimize(kmeans(X, {}, rng).inertia);
  }
}
BENCHMARK(BM_KMeans)->Arg(200)->Arg(2000);

void BM_Spectral(benchmark::State& state) {
  const Matrix X = circles(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    Rng rng(4);
    benchmark::DoNotOptimize(spectral(X, 2, KernelSpec::rbf(1.0), rng).eigenvalues.data());
  }
}
BENCHMARK(BM_Spectral)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_InfoNce(benchmark::State& state) {
  Rng rng(5);
  Matrix Z(state.range(0), 2), Za(state.range(0), 2);
  for (Eigen::Index i = 0; i < Z.size(); ++i) Z.data()[i] = rng.normal();
  for (Eigen::Index i = 0; i < Za.size(); ++i) Za.data()[i] = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(info_nce_loss(Z, Za).loss);
}
BENCHMARK(BM_InfoNce)->Arg(200)->Arg(1000);

void BM_ContrastiveEpochs(benchmark::State& state) {
  const Matrix X = circles(200);
  Rng rng(6);
  const Critic critic = init_critic(2, 20, 2, rng);
  TrainConfig cfg;
  cfg.epochs = static_cast<int>(state.range(0));
  cfg.learning_rate = 1e-4;
  for (auto _ : state)
    benchmark::DoNotOptimize(train_contrastive(critic, X, Rotation2d{0.0, 2.0 * std::numbers::pi}, cfg).labels);
}
BENCHMARK(BM_ContrastiveEpochs)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
