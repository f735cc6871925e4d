#include "lcf/driver/runner.hpp"

#include <fstream>

#include "lcf/driver/fem_run.hpp"
#include "lcf/driver/matpoint.hpp"
#include "lcf/error.hpp"

namespace lcf::driver {

void apply_overrides(Scenario& sc, const RunOverrides& ov) {
  if (ov.tolerance) {
    if (!(*ov.tolerance > 0.0)) throw Error("--tol must be positive");
    sc.tolerance = *ov.tolerance;
  }
  if (ov.max_cycles) {
    if (*ov.max_cycles < 1) throw Error("--max-cycles must be >= 1");
    sc.protocol.cycles = std::min(sc.protocol.cycles, *ov.max_cycles);
  }
  if (ov.output_dir) sc.output_dir = *ov.output_dir;
}

std::vector<std::filesystem::path> run_scenario(const Scenario& sc) {
  ReturnMapOptions rm;
  rm.tol = sc.tolerance;
  rm.max_iter = sc.max_iterations;
  std::filesystem::create_directories(sc.output_dir);
  const auto hist_path = sc.output_dir / (sc.name + "_history.csv");
  const auto cyc_path = sc.output_dir / (sc.name + "_cycles.csv");
  std::vector<std::filesystem::path> written;

  if (sc.mode == RunMode::matpoint) {
    MatpointOptions opts;
    opts.return_map = rm;
    const auto h = run_matpoint(sc.material, sc.protocol, opts);
    emit_csv(h.rows_table(), hist_path);
    emit_csv(h.cycles_table(), cyc_path);
    return {hist_path, cyc_path};
  }

  FemModel model{fem::read_mesh(sc.fem.mesh), sc.material, {}, sc.fem.cod_node_a, sc.fem.cod_node_b};
  model.solver.return_map = rm;
  model.solver.mean_dilatation = sc.fem.mean_dilatation;
  FemLoading loading;
  loading.load_axis = sc.fem.load_axis;
  loading.amplitude = sc.fem.amplitude;
  loading.amplitude_step = sc.fem.amplitude_step;
  loading.cycles = sc.protocol.cycles;
  loading.steps_per_load = sc.fem.steps_per_load;
  loading.release_substeps = sc.fem.release_substeps;
  SnapshotSink sink;
  if (sc.fem.snapshot_every > 0) {
    sink = [&](int cycle, const fem::NonlocalSolver& s) {
      if (cycle % sc.fem.snapshot_every) return;
      const auto path = sc.output_dir / (sc.name + "_snapshot_c" + std::to_string(cycle) + ".txt");
      std::ofstream out(path);
      if (!out) throw Error("cannot open " + path.string() + " for writing");
      s.write_snapshot(out);
      written.push_back(path);
    };
  }
  const auto h = run_fem(model, loading, sink);
  emit_csv(h.rows_table(), hist_path);
  emit_csv(h.cycles_table(), cyc_path);
  written.push_back(hist_path);
  written.push_back(cyc_path);
  return written;
}

}  // namespace lcf::driver
