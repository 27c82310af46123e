// Hot-path timings: one explicit step (1-D and 2-D), the full diagnostic
// report, and the spectral gap solve.

#include <benchmark/benchmark.h>

#include <vector>

#include "ufd/functionals.hpp"
#include "ufd/poincare.hpp"
#include "ufd/solver.hpp"
#include "ufd/weights.hpp"

namespace {

struct Setup {
  ufd::Weight weight;
  ufd::Equilibrium eq;
  ufd::DensityField f0;

  static Setup gaussian_1d(int n) {
    auto grid = ufd::Grid::truncated_1d(n, 9.0);
    ufd::Weight w = ufd::make_weight(grid, ufd::PotentialSpec::quadratic(1.0));
    ufd::Equilibrium eq = ufd::make_equilibrium(w, 2.0);
    ufd::DensityField f = ufd::make_initial(eq, ufd::InitialSpec::cosine(0.3));
    return Setup{std::move(w), std::move(eq), std::move(f)};
  }

  static Setup gaussian_2d(int n) {
    auto grid = ufd::Grid::tensor_2d(n, 8.0);
    ufd::Weight w = ufd::make_weight(grid, ufd::PotentialSpec::quadratic(1.0));
    ufd::Equilibrium eq = ufd::make_equilibrium(w, 2.0);
    ufd::DensityField f = ufd::make_initial(eq, ufd::InitialSpec::cosine(0.2));
    return Setup{std::move(w), std::move(eq), std::move(f)};
  }
};

void bm_step_1d(benchmark::State& state) {
  Setup s = Setup::gaussian_1d(static_cast<int>(state.range(0)));
  std::vector<double> f(s.f0.values().begin(), s.f0.values().end());
  const double dt = ufd::stable_dt(f, s.weight, 2.0, 0.4);
  for (auto _ : state) {
    std::vector<double> work = f;
    ufd::step_in_place(work, s.weight, 2.0, dt);
    benchmark::DoNotOptimize(work.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_step_2d(benchmark::State& state) {
  Setup s = Setup::gaussian_2d(static_cast<int>(state.range(0)));
  std::vector<double> f(s.f0.values().begin(), s.f0.values().end());
  const double dt = ufd::stable_dt(f, s.weight, 2.0, 0.4);
  for (auto _ : state) {
    std::vector<double> work = f;
    ufd::step_in_place(work, s.weight, 2.0, dt);
    benchmark::DoNotOptimize(work.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void bm_report(benchmark::State& state) {
  Setup s = Setup::gaussian_1d(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    ufd::FunctionalReport rep = ufd::evaluate(s.f0, s.eq, s.weight);
    benchmark::DoNotOptimize(rep.gap);
  }
}

void bm_spectral_gap(benchmark::State& state) {
  Setup s = Setup::gaussian_1d(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    ufd::SpectralGapResult sg = ufd::spectral_gap(s.eq);
    benchmark::DoNotOptimize(sg.lambda1);
  }
}

BENCHMARK(bm_step_1d)->Arg(400)->Arg(1600);
BENCHMARK(bm_step_2d)->Arg(64)->Arg(128);
BENCHMARK(bm_report)->Arg(400)->Arg(1600);
BENCHMARK(bm_spectral_gap)->Arg(400)->Arg(1600);

}  // namespace

BENCHMARK_MAIN();
