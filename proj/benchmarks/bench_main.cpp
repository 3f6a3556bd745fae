#include <benchmark/benchmark.h>

#include <numbers>

#include "selfadj/ab_family.hpp"
#include "selfadj/ab_transform.hpp"
#include "selfadj/ivp.hpp"
#include "selfadj/spectral.hpp"

using namespace selfadj;

namespace {

void BM_SolveIvp(benchmark::State& state) {
  const auto q = Potential::inverse_square(1.5);
  for (auto _ : state) benchmark::DoNotOptimize(solve_ivp(q, -1.0, 1.0, 1.0, 0.0, 10.0));
}
BENCHMARK(BM_SolveIvp);

void BM_ShootMismatch(benchmark::State& state) {
  const double kappa = 0.5;
  const auto q = Potential::inverse_square(kappa);
  const auto e = extension_from_theta(q, BoundaryParameter(0.75 * std::numbers::pi), FrobeniusFrame{kappa});
  for (auto _ : state) benchmark::DoNotOptimize(shoot_mismatch(e, -0.7));
}
BENCHMARK(BM_ShootMismatch);

void BM_EigenvaluesBelow(benchmark::State& state) {
  const double kappa = -0.25;
  const auto q = Potential::inverse_square(kappa);
  const auto e = extension_from_theta(q, BoundaryParameter(0.6 * std::numbers::pi), FrobeniusFrame{kappa});
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_below(e, {-1e4, -1e-8}));
}
BENCHMARK(BM_EigenvaluesBelow)->Unit(benchmark::kMillisecond);

void BM_TransformForward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto grid = CylGrid::make(0.25, 4.0, 64, n, -4.0, 4.0, 2 * n);
  const auto samples = sample(CylTestFunction::mixed(2.0, 1.0, 2.0), grid);
  for (auto _ : state) benchmark::DoNotOptimize(transform_forward(samples));
}
BENCHMARK(BM_TransformForward)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
