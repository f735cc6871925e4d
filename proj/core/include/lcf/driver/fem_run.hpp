#pragma once

#include <functional>
#include <vector>

#include "lcf/driver/csv.hpp"
#include "lcf/fem/solver.hpp"

namespace lcf::driver {

/// Grip-controlled cycling of a specimen between the two mesh faces normal
/// to `load_axis`. The lower face is clamped; the upper face keeps its
/// transverse displacements at zero and is pulled to the cycle amplitude,
/// then released by ramping its reaction to zero.
struct FemLoading {
  int load_axis = 1;
  double amplitude = 0.05;       // mm, first cycle
  double amplitude_step = 0.0;   // mm added per cycle
  int cycles = 1;
  int steps_per_load = 10;
  int release_substeps = 10;
};

struct FemModel {
  fem::Mesh mesh;
  MaterialParams material;
  fem::SolverOptions solver;
  int cod_node_a = -1;  // optional opening gauge
  int cod_node_b = -1;
};

struct FemRow {
  int step = 0;
  int cycle = 0;
  int releasing = 0;
  double displacement = 0.0;  // mean grip displacement
  double force = 0.0;         // grip force
  double cod = 0.0;
  int outer_iterations = 0;
  int newton_iterations = 0;
};

struct FemCycleSummary {
  int cycle = 0;
  double peak_force = 0.0;
  double peak_displacement = 0.0;
  double peak_cod = 0.0;
  double residual_displacement = 0.0;
  double unloading_slope = 0.0;  // secant over the first tenth of the release
};

struct FemHistory {
  std::vector<FemRow> rows;
  std::vector<FemCycleSummary> cycles;

  Table rows_table() const;
  Table cycles_table() const;
};

/// Called after the loading branch of every cycle.
using SnapshotSink = std::function<void(int cycle, const fem::NonlocalSolver&)>;

FemHistory run_fem(const FemModel& model, const FemLoading& loading, const SnapshotSink& sink = {});

}  // namespace lcf::driver
