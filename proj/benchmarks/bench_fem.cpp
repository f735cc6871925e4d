#include <benchmark/benchmark.h>

#include <vector>

#include "lcf/fem/helmholtz.hpp"
#include "lcf/fem/notched_plate.hpp"
#include "lcf/fem/solver.hpp"
#include "lcf/material.hpp"

using namespace lcf;
using namespace lcf::fem;

namespace {

Mesh plate(double h) {
  NotchedPlateSpec spec;
  spec.element_size = h;
  return make_notched_plate(spec);
}

LoadStep grip_step(const Mesh& m, double u) {
  const auto [lo, hi] = m.bounds();
  LoadStep s;
  for (int n : m.nodes_on_plane(1, lo[1], 1e-9))
    for (int d = 0; d < 3; ++d) s.dirichlet.push_back({n, d, 0.0});
  for (int n : m.nodes_on_plane(1, hi[1], 1e-9))
    for (int d = 0; d < 3; ++d) s.dirichlet.push_back({n, d, d == 1 ? u : 0.0});
  return s;
}

void BM_HelmholtzFactorise(benchmark::State& st) {
  const Mesh m = plate(1.0 / static_cast<double>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(HelmholtzSolver(m, 2.0));
  st.counters["nodes"] = static_cast<double>(m.num_nodes());
}
BENCHMARK(BM_HelmholtzFactorise)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_HelmholtzSolve(benchmark::State& st) {
  const Mesh m = plate(1.0 / static_cast<double>(st.range(0)));
  const HelmholtzSolver solver(m, 2.0);
  std::vector<double> src(8 * m.num_elements());
  for (std::size_t i = 0; i < src.size(); ++i) src[i] = 1e-3 * static_cast<double>(i % 17);
  for (auto _ : st) benchmark::DoNotOptimize(solver.solve(src));
  st.counters["nodes"] = static_cast<double>(m.num_nodes());
}
BENCHMARK(BM_HelmholtzSolve)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_EquilibriumAssembly(benchmark::State& st) {
  const Mesh m = plate(1.0 / static_cast<double>(st.range(0)));
  NonlocalSolver solver(m, presets::compact_tension());
  const LoadStep step = grip_step(m, 0.05);
  const std::vector<double> driver(8 * m.num_elements(), 0.0);
  for (auto _ : st) benchmark::DoNotOptimize(solver.assemble_equilibrium(solver.displacement(), driver, step));
  st.counters["elements"] = static_cast<double>(m.num_elements());
}
BENCHMARK(BM_EquilibriumAssembly)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_StaggeredPlasticStep(benchmark::State& st) {
  const Mesh m = plate(1.0 / static_cast<double>(st.range(0)));
  const LoadStep step = grip_step(m, 0.1);
  for (auto _ : st) {
    NonlocalSolver solver(m, presets::compact_tension());
    benchmark::DoNotOptimize(solver.staggered_step(step));
  }
}
BENCHMARK(BM_StaggeredPlasticStep)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
