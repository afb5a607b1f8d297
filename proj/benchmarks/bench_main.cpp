#include <benchmark/benchmark.h>

#include "gevlab/cjs.hpp"
#include "gevlab/quantizer.hpp"
#include "gevlab/system.hpp"

using namespace gevlab;

namespace {

CVector packet(const GridSpec& g) {
  CVector u(static_cast<Eigen::Index>(g.size()));
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double y = g.x(j) - g.x0();
    u[static_cast<Eigen::Index>(j)] = std::exp(-y * y / 0.01) * std::polar(1.0, 25.0 * y);
  }
  return u;
}

void BM_Dft(benchmark::State& st) {
  const GridSpec g(static_cast<std::size_t>(st.range(0)), 2.0, 1.0);
  const CVector u = packet(g);
  for (auto _ : st) benchmark::DoNotOptimize(dft(u));
}
BENCHMARK(BM_Dft)->RangeMultiplier(4)->Range(64, 4096);

void BM_GevreyWeight(benchmark::State& st) {
  const GridSpec g(static_cast<std::size_t>(st.range(0)), 2.0, 1.0);
  const CVector u = packet(g);
  for (auto _ : st) benchmark::DoNotOptimize(gevrey_weight(g, u, 0.3, 0.5, +1));
}
BENCHMARK(BM_GevreyWeight)->RangeMultiplier(4)->Range(64, 4096);

void BM_QuantizeB(benchmark::State& st) {
  const GridSpec g(static_cast<std::size_t>(st.range(0)), 2.0, 1.0);
  const SymbolB sb(CoefficientField(CoefficientParams{}), 1.0);
  const SymbolField s = sample_b(sb, g, 0.05);
  for (auto _ : st) benchmark::DoNotOptimize(quantize(s));
}
BENCHMARK(BM_QuantizeB)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

void BM_Symmetrizer(benchmark::State& st) {
  const GridSpec g(static_cast<std::size_t>(st.range(0)), 2.0, 1.0);
  const SymbolB sb(CoefficientField(CoefficientParams{}), 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(make_symmetrizer(sb, g, 0.05));
}
BENCHMARK(BM_Symmetrizer)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

void BM_Rk4Step(benchmark::State& st) {
  const GridSpec g(static_cast<std::size_t>(st.range(0)), 2.0, 1.0);
  const ModelSystem sys(g, CoefficientField(CoefficientParams{}), NonlinearityF::wave_default());
  SystemState s = make_initial_state(g, 1.0, InitialData{}, 1);
  const double dt = sys.max_dt();
  for (auto _ : st) benchmark::DoNotOptimize(sys.step_rk4(s, dt));
}
BENCHMARK(BM_Rk4Step)->RangeMultiplier(4)->Range(64, 4096);

void BM_EnergyBreakdown(benchmark::State& st) {
  const GridSpec g(static_cast<std::size_t>(st.range(0)), 2.0, 1.0);
  const CoefficientField coeff{CoefficientParams{}};
  const SymbolB sb(coeff, 1.0);
  const ModelSystem sys(g, coeff, NonlinearityF::wave_default());
  const SystemState s = make_initial_state(g, 1.0, InitialData{}, 1);
  const Symmetrizer sym = make_symmetrizer(sb, g, 0.0);
  for (auto _ : st) {
    benchmark::DoNotOptimize(dt_energy_breakdown(s, sys.rhs_parts(s), sym, {0.3, 0.5}));
  }
}
BENCHMARK(BM_EnergyBreakdown)->RangeMultiplier(2)->Range(64, 512);

void BM_CjsMode(benchmark::State& st) {
  const TimeCoefficient tc = TimeCoefficient::linear();
  const double xi = static_cast<double>(st.range(0));
  for (auto _ : st) {
    benchmark::DoNotOptimize(integrate_mode(tc, xi, tc.T, ModeState{}, [](const ModeState&) {}));
  }
}
BENCHMARK(BM_CjsMode)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
