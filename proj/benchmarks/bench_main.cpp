#include <benchmark/benchmark.h>

#include <random>

#include "kz/experiments.hpp"

using namespace kz;

namespace {

GradedAlgebra conca43() {
  AlgebraSource src;
  src.kind = AlgebraSource::Kind::Conca;
  src.e = 4;
  src.r = 3;
  src.seed = 1;
  return make_algebra(src, Field::kDefaultPrime);
}

Matrix random_matrix(std::size_t r, std::size_t c, const Field& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix m(r, c);
  for (auto& v : m.a) v = f.from_int(std::int64_t(rng() % f.p()));
  return m;
}

void BM_Rank(benchmark::State& state) {
  const Field f;
  const auto n = std::size_t(state.range(0));
  const Matrix m = random_matrix(n, n, f, 1);
  for (auto _ : state) benchmark::DoNotOptimize(rank(f, m));
}
BENCHMARK(BM_Rank)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Mul(benchmark::State& state) {
  const Field f;
  const auto n = std::size_t(state.range(0));
  const Matrix a = random_matrix(n, n, f, 2), b = random_matrix(n, n, f, 3);
  for (auto _ : state) benchmark::DoNotOptimize(mul(f, a, b));
}
BENCHMARK(BM_Mul)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_KernelBasis(benchmark::State& state) {
  const Field f;
  const auto n = std::size_t(state.range(0));
  const Matrix m = random_matrix(n / 2, n, f, 4);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_basis(f, m));
}
BENCHMARK(BM_KernelBasis)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_ResolutionOfK(benchmark::State& state) {
  const GradedAlgebra A = conca43();
  const int m = int(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(resolution_of_k(A, m));
}
BENCHMARK(BM_ResolutionOfK)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_DirectLinearity(benchmark::State& state) {
  const GradedAlgebra A = conca43();
  std::mt19937_64 rng(5);
  const GradedModule M = table_to_module(A, random_table(4, 2, 6, A.prime, rng));
  for (auto _ : state) benchmark::DoNotOptimize(is_m_step_linear(A, M, int(state.range(0))));
}
BENCHMARK(BM_DirectLinearity)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void BM_DeltaLinearity(benchmark::State& state) {
  const GradedAlgebra A = conca43();
  const int m = int(state.range(0));
  const auto kres = default_k_cache().get(A, m + 1);
  std::mt19937_64 rng(5);
  const ShortTable T = random_table(4, 2, 6, A.prime, rng);
  for (auto _ : state) benchmark::DoNotOptimize(delta_linearity_test(A, *kres, T, m));
}
BENCHMARK(BM_DeltaLinearity)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  SweepConfig cfg;
  cfg.source.kind = AlgebraSource::Kind::Conca;
  cfg.source.e = 4;
  cfg.source.r = 3;
  cfg.p = 1;
  cfg.q = 3;
  cfg.m = 4;
  cfg.trials = 100;
  const GradedAlgebra A = make_algebra(cfg.source, cfg.prime);
  for (auto _ : state) benchmark::DoNotOptimize(density_sweep(A, cfg, 1, 1));
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

void BM_SeriesInverse(benchmark::State& state) {
  const PowerSeries h(LaurentPoly(0, {1, 4, 3}));
  const int N = int(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(inverse(negate_variable(h), N));
}
BENCHMARK(BM_SeriesInverse)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
