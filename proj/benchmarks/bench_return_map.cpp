#include <benchmark/benchmark.h>

#include "lcf/driver/matpoint.hpp"
#include "lcf/material.hpp"
#include "lcf/plasticity.hpp"

using namespace lcf;

namespace {

const SymTensor3 kDir = SymTensor3{1.0, -0.4, -0.3, 0.2, 0.1, -0.15} / 1.2;

void BM_IntegrateElastic(benchmark::State& st) {
  const auto p = presets::dogbone().plasticity;
  const PlasticState s0 = PlasticState::virgin(p);
  for (auto _ : st) benchmark::DoNotOptimize(integrate(s0, 1e-4 * kDir, p));
}
BENCHMARK(BM_IntegrateElastic);

void BM_IntegratePlastic(benchmark::State& st) {
  const auto p = presets::dogbone().plasticity;
  const PlasticState s0 = integrate(PlasticState::virgin(p), 5e-3 * kDir, p).state;
  const SymTensor3 target = 6e-3 * kDir + SymTensor3{0.0, 2e-4, 0.0, 1e-4, 0.0, 0.0};
  for (auto _ : st) benchmark::DoNotOptimize(integrate(s0, target, p));
}
BENCHMARK(BM_IntegratePlastic);

void BM_SubstepIntegrate(benchmark::State& st) {
  const auto p = presets::dogbone().plasticity;
  const PlasticState s0 = integrate(PlasticState::virgin(p), 5e-3 * kDir, p).state;
  const SymTensor3 target = 5.1e-3 * kDir;
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(substep_integrate(s0, target, p, n));
}
BENCHMARK(BM_SubstepIntegrate)->Arg(100)->Arg(1000)->Arg(10000);

void BM_UniaxialStressCycle(benchmark::State& st) {
  const auto m = presets::dogbone();
  for (auto _ : st) {
    driver::UniaxialStressPoint pt(m);
    for (int i = 1; i <= 80; ++i) {
      const double phase = i / 80.0;
      const double e = phase <= 0.25 ? 0.06 * phase : phase <= 0.75 ? 0.015 - 0.06 * (phase - 0.25) : -0.015 + 0.06 * (phase - 0.75);
      benchmark::DoNotOptimize(pt.advance(e));
    }
  }
}
BENCHMARK(BM_UniaxialStressCycle);

}  // namespace
