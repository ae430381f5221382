#include <benchmark/benchmark.h>

#include "ephx/collisions.hpp"
#include "ephx/propagator.hpp"
#include "ephx/spectral.hpp"
#include "ephx/wigner.hpp"

using namespace ephx;

namespace {

PotentialProfile barrier(int nx) { return double_barrier(Grid::centered(nx, 0.2), 2.0, 0.3, 16.0); }

const EnergyBasis& basis_4096() {
  static const EnergyBasis b = diagonalize(barrier(4096));
  return b;
}

}  // namespace

static void BM_SplitStep(benchmark::State& st) {
  auto V = barrier(static_cast<int>(st.range(0)));
  SplitStepper stepper(V, Constants::m_eff, 0.005);
  auto psi = gaussian_packet(V.grid, -40.0, 8.0, 0.15);
  for (auto _ : st) stepper.step(psi);
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_SplitStep)->Arg(1024)->Arg(4096)->Arg(8192);

static void BM_CoupledStep(benchmark::State& st) {
  ExactModelConfig cfg;
  cfg.v = barrier(static_cast<int>(st.range(0)));
  cfg.alpha = 2e-3;
  cfg.dt = 0.0025;
  CoupledStepper stepper(cfg, Constants::m_eff);
  CoupledState s{gaussian_packet(cfg.v.grid, 0.0, 4.0, 0.0), WaveFunction(cfg.v.grid)};
  for (auto _ : st) stepper.step(s);
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_CoupledStep)->Arg(256)->Arg(4096);

static void BM_Diagonalize(benchmark::State& st) {
  auto V = barrier(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(diagonalize(V));
}
BENCHMARK(BM_Diagonalize)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

static void BM_ProjectSynthesize(benchmark::State& st) {
  const auto& b = basis_4096();
  auto psi = gaussian_packet(b.grid, -150.0, 35.0, 0.15);
  for (auto _ : st) benchmark::DoNotOptimize(synthesize(project(psi, b), b));
}
BENCHMARK(BM_ProjectSynthesize)->Unit(benchmark::kMillisecond);

static void BM_EnergyShift(benchmark::State& st) {
  const auto& b = basis_4096();
  auto c = project(gaussian_packet(b.grid, -150.0, 35.0, 0.15), b);
  auto axis = st.range(0) ? ShiftAxis::Merged : ShiftAxis::ByGaugeClass;
  for (auto _ : st) benchmark::DoNotOptimize(shift_coefficients(c, b, 0.073 / 40, nullptr, axis));
}
BENCHMARK(BM_EnergyShift)->Arg(0)->Arg(1);

static void BM_Wigner(benchmark::State& st) {
  Grid g = Grid::centered(static_cast<int>(st.range(0)), 0.2);
  auto psi = gaussian_packet(g, 0.0, 8.0, 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(wigner_transform(psi));
}
BENCHMARK(BM_Wigner)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

static void BM_Reconstruct(benchmark::State& st) {
  Grid g = Grid::centered(512, 0.2);
  auto W = wigner_transform(gaussian_packet(g, 3.0, 5.0, 0.3));
  for (auto _ : st) benchmark::DoNotOptimize(reconstruct_pure_state(W));
}
BENCHMARK(BM_Reconstruct)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
