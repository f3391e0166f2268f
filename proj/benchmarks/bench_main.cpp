#include <numbers>
#include <random>

#include <benchmark/benchmark.h>

#include "functorad/dynamics.hpp"
#include "functorad/newton.hpp"
#include "functorad/random_maps.hpp"
#include "functorad/tangent.hpp"

using namespace functorad;

namespace {

SmoothMap sample_map(Eigen::Index n, int depth) {
  std::mt19937_64 rng(42);
  return sampling::random_map(n, n, depth, rng);
}

void BM_Evaluate(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const SmoothMap f = sample_map(n, 3);
  const Vector u = Vector::Constant(n, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(f, u));
}
BENCHMARK(BM_Evaluate)->Arg(2)->Arg(8)->Arg(32);

void BM_Differential(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const SmoothMap f = sample_map(n, 3);
  const Vector u = Vector::Constant(n, 0.3), e = Vector::Constant(n, -0.7);
  for (auto _ : state) benchmark::DoNotOptimize(differential(f, u, e));
}
BENCHMARK(BM_Differential)->Arg(2)->Arg(8)->Arg(32);

void BM_Jacobian(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const SmoothMap f = sample_map(n, 3);
  const Vector u = Vector::Constant(n, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(jacobian(f, u));
}
BENCHMARK(BM_Jacobian)->Arg(2)->Arg(8)->Arg(32);

void BM_SecondTangent(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const SmoothMap f = sample_map(n, 3);
  const Vector a = Vector::Constant(n, 0.3);
  const SecondTangent st{a, 2 * a, -a, 0.5 * a};
  for (auto _ : state) benchmark::DoNotOptimize(second_tangent_map(f, st));
}
BENCHMARK(BM_SecondTangent)->Arg(2)->Arg(8);

void BM_CircularOrbitRk4(benchmark::State& state) {
  const VectorField x = newton::lagrangian_field({1, 1, 1, 1e-9});
  Vector q0(6);
  q0 << 1, 0, 0, 0, 1, 0;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_rk4(x, q0, 2 * std::numbers::pi, 1e-3));
}
BENCHMARK(BM_CircularOrbitRk4)->Unit(benchmark::kMillisecond);

void BM_PicardLinear(benchmark::State& state) {
  const VectorField x(BasicManifold::euclidean(1), SmoothMap::identity(1));
  const Vector one = Vector::Ones(1);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_picard(x, one, 0.5));
}
BENCHMARK(BM_PicardLinear)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
