#include <benchmark/benchmark.h>

#include <vector>

#include "abp/bias.hpp"
#include "abp/engine.hpp"
#include "abp/oracle.hpp"
#include "abp/spde.hpp"

using namespace abp;

static void BM_kernel_row(benchmark::State& state) {
  KernelSpec k = KernelSpec::wrapped_gaussian(1, 0.05, 0.9);
  const int G = static_cast<int>(state.range(0));
  std::vector<double> row(G);
  double zeta[1] = {0.37};
  for (auto _ : state) {
    kernel_row(k, G, std::span<const double>(zeta, 1), row);
    benchmark::DoNotOptimize(row.data());
  }
}
BENCHMARK(BM_kernel_row)->Arg(128)->Arg(256)->Arg(1024);

static void BM_deposit_refresh(benchmark::State& state) {
  KernelSpec k = KernelSpec::wrapped_gaussian(1, 0.05, 0.9);
  BiasGrid grid(k, NormalizationSpec::l1(), InitialMeasure::single_atom({0.5}),
                static_cast<int>(state.range(0)));
  double z[1] = {0.25};
  for (auto _ : state) {
    double w = grid.weight(std::span<const double>(z, 1));
    grid.deposit(std::span<const double>(z, 1), w, 1e-3);
    z[0] = grid.h().v[3] - static_cast<long>(grid.h().v[3]); // wander a little
  }
}
BENCHMARK(BM_deposit_refresh)->Arg(256)->Arg(1024);

static void BM_abp_step_1d(benchmark::State& state) {
  EngineSettings s;
  s.dyn.family = DynamicsSpec::Family::Brownian;
  s.dyn.potential = Potential::cosine1({2.0});
  s.dyn.xi.m = 1;
  s.kernel = KernelSpec::wrapped_gaussian(1, 0.05, 0.9);
  s.norm = NormalizationSpec::l1();
  s.grid_size = 256;
  s.x0 = {0.5};
  s.observables = {Observable::parse("cos1")};
  BiasGrid grid(s.kernel, s.norm, InitialMeasure::single_atom({0.5}), s.grid_size);
  FiniteDimSystem sys(s.dyn, StepperConfig::Scheme::EulerMaruyama, s.x0);
  RngStream rng(1, 0);
  std::vector<double> z(1);
  for (auto _ : state) {
    sys.colvar(z);
    double w = grid.weight(z);
    sys.advance(grid, 1e-3, rng, 0, 0.0);
    grid.deposit(z, w, 1e-3);
  }
}
BENCHMARK(BM_abp_step_1d);

static void BM_spde_step(benchmark::State& state) {
  SpdeSystem sys(SpdeModel::cosine(1.0), 32, 128);
  GridFunction zero(1, 256, 0.0);
  BiasGrid frozen = BiasGrid::frozen(zero, NormalizationSpec::l1());
  RngStream rng(2, 0);
  for (auto _ : state) sys.step(frozen, 1e-3, rng);
}
BENCHMARK(BM_spde_step);

static void BM_poisson_oracle(benchmark::State& state) {
  Potential v = Potential::cosine1({2.0});
  Observable phi = Observable::parse("cos1");
  for (auto _ : state) {
    PoissonSolution sol = solve_poisson_1d(v, nullptr, phi, 2048);
    benchmark::DoNotOptimize(sol.v_inf);
  }
}
BENCHMARK(BM_poisson_oracle);

BENCHMARK_MAIN();
