#include "lcf/driver/fem_run.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "lcf/error.hpp"

namespace lcf::driver {

namespace {

constexpr int kMaxStepCuts = 6;

/// Linear blend of two steps with the same constraint layout; a force absent
/// from one side counts as zero there.
fem::LoadStep blend(const fem::LoadStep& a, const fem::LoadStep& b, double t) {
  fem::LoadStep out = b;
  for (std::size_t i = 0; i < out.dirichlet.size(); ++i) {
    const auto& da = a.dirichlet[i];
    auto& d = out.dirichlet[i];
    d.value = (1.0 - t) * da.value + t * d.value;
  }
  std::map<fem::DofId, double> fa, fb;
  for (const auto& f : a.forces) fa[{f.node, f.dir}] += f.value;
  for (const auto& f : b.forces) fb[{f.node, f.dir}] += f.value;
  for (const auto& [dof, v] : fa) fb.try_emplace(dof, 0.0);
  out.forces.clear();
  for (const auto& [dof, v] : fb) {
    const auto it = fa.find(dof);
    out.forces.push_back({dof.node, dof.dir, (1.0 - t) * (it == fa.end() ? 0.0 : it->second) + t * v});
  }
  return out;
}

/// Solves `to` starting from the converged state `from`, halving the
/// increment on convergence failure.
fem::StepReport solve_step(fem::NonlocalSolver& solver, const fem::LoadStep& from, const fem::LoadStep& to,
                           int depth = 0) {
  try {
    return solver.staggered_step(to);
  } catch (const ConvergenceError&) {
    if (depth == kMaxStepCuts) throw;
  }
  const fem::LoadStep mid = blend(from, to, 0.5);
  fem::StepReport first = solve_step(solver, from, mid, depth + 1);
  fem::StepReport second = solve_step(solver, mid, to, depth + 1);
  second.outer_iterations += first.outer_iterations;
  second.newton_iterations += first.newton_iterations;
  return second;
}

}  // namespace

FemHistory run_fem(const FemModel& model, const FemLoading& loading, const SnapshotSink& sink) {
  using fem::DofId;
  if (loading.load_axis < 0 || loading.load_axis > 2) throw ContractViolation("load axis must be 0, 1 or 2");
  if (loading.cycles < 1 || loading.steps_per_load < 1 || loading.release_substeps < 1)
    throw ContractViolation("loading needs positive cycle and step counts");
  const int ax = loading.load_axis;
  const auto [lo, hi] = model.mesh.bounds();
  const double tol = 1e-9 * std::max(1.0, hi[ax] - lo[ax]);
  const auto bottom = model.mesh.nodes_on_plane(ax, lo[ax], tol);
  const auto top = model.mesh.nodes_on_plane(ax, hi[ax], tol);
  if (bottom.empty() || top.empty()) throw Error("mesh has no nodes on the grip faces");
  const int n_nodes = static_cast<int>(model.mesh.num_nodes());
  for (int id : {model.cod_node_a, model.cod_node_b})
    if (id >= n_nodes) throw ContractViolation("opening gauge node out of range");

  fem::NonlocalSolver solver(model.mesh, model.material, model.solver);
  std::vector<DofId> grip;
  for (int n : top) grip.push_back({n, ax});

  fem::LoadStep fixed;
  for (int n : bottom)
    for (int d = 0; d < 3; ++d) fixed.dirichlet.push_back({n, d, 0.0});
  for (int n : top)
    for (int d = 0; d < 3; ++d)
      if (d != ax) fixed.dirichlet.push_back({n, d, 0.0});

  FemHistory h;
  int step = 0;
  const auto record = [&](int cycle, int releasing, const fem::StepReport& rep) {
    const auto& u = solver.displacement();
    double disp = 0.0;
    for (const auto& g : grip) disp += u[g.index()];
    disp /= static_cast<double>(grip.size());
    double cod = 0.0;
    if (model.cod_node_a >= 0 && model.cod_node_b >= 0)
      cod = u[3 * model.cod_node_b + ax] - u[3 * model.cod_node_a + ax];
    h.rows.push_back({++step, cycle, releasing, disp, solver.force_sum(grip), cod, rep.outer_iterations,
                      rep.newton_iterations});
    return h.rows.back();
  };
  const auto run_step = [&](const fem::LoadStep& from, const fem::LoadStep& s, int cycle) {
    try {
      return solve_step(solver, from, s);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("cycle " + std::to_string(cycle) + ", step " + std::to_string(step + 1) + ": " + e.what(),
                             e.last_residual());
    }
  };

  for (int c = 1; c <= loading.cycles; ++c) {
    const double target = loading.amplitude + (c - 1) * loading.amplitude_step;
    std::vector<double> start;
    for (const auto& g : grip) start.push_back(solver.displacement()[g.index()]);
    const auto ramp = [&](double f) {
      fem::LoadStep s = fixed;
      for (std::size_t g = 0; g < grip.size(); ++g)
        s.dirichlet.push_back({grip[g].node, ax, start[g] + f * (target - start[g])});
      return s;
    };
    fem::LoadStep s = ramp(0.0);
    for (int i = 1; i <= loading.steps_per_load; ++i) {
      fem::LoadStep next = ramp(static_cast<double>(i) / loading.steps_per_load);
      record(c, 0, run_step(s, next, c));
      s = std::move(next);
    }
    FemCycleSummary sum;
    sum.cycle = c;
    sum.peak_force = h.rows.back().force;
    sum.peak_displacement = h.rows.back().displacement;
    sum.peak_cod = h.rows.back().cod;
    if (sink) sink(c, solver);

    const auto release = fem::release_dirichlet(s, grip, solver.internal_force(), loading.release_substeps);
    // The released state itself: grip forces equal to the reactions.
    fem::LoadStep prev = release.front();
    prev.forces = s.forces;
    for (const auto& g : grip) prev.forces.push_back({g.node, g.dir, solver.internal_force()[g.index()]});
    bool probed = false;
    for (const auto& r : release) {
      const FemRow row = record(c, 1, run_step(prev, r, c));
      prev = r;
      if (!probed && row.force <= 0.9 * sum.peak_force) {
        sum.unloading_slope = (sum.peak_force - row.force) / (sum.peak_displacement - row.displacement);
        probed = true;
      }
    }
    sum.residual_displacement = h.rows.back().displacement;
    h.cycles.push_back(sum);
  }
  return h;
}

Table FemHistory::rows_table() const {
  Table t;
  t.columns = {"step", "cycle", "releasing", "displacement", "force", "cod", "outer_iterations", "newton_iterations"};
  for (const auto& r : rows)
    t.add_row({double(r.step), double(r.cycle), double(r.releasing), r.displacement, r.force, r.cod,
               double(r.outer_iterations), double(r.newton_iterations)});
  return t;
}

Table FemHistory::cycles_table() const {
  Table t;
  t.columns = {"cycle", "peak_force", "peak_displacement", "peak_cod", "residual_displacement", "unloading_slope"};
  for (const auto& c : cycles)
    t.add_row({double(c.cycle), c.peak_force, c.peak_displacement, c.peak_cod, c.residual_displacement,
               c.unloading_slope});
  return t;
}

}  // namespace lcf::driver
