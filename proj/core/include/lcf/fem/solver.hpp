#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "lcf/error.hpp"
#include "lcf/fem/helmholtz.hpp"
#include "lcf/fem/hex8.hpp"
#include "lcf/fem/mesh.hpp"
#include "lcf/material.hpp"

namespace lcf::fem {

struct DofId {
  int node = 0;
  int dir = 0;  // 0 = x, 1 = y, 2 = z

  int index() const { return 3 * node + dir; }
  friend auto operator<=>(const DofId&, const DofId&) = default;
};

struct DirichletEntry {
  int node = 0;
  int dir = 0;
  double value = 0.0;  // mm, absolute
};

struct NodalForce {
  int node = 0;
  int dir = 0;
  double value = 0.0;  // N
};

/// Constraints and loads of one step, in absolute (total) values.
struct LoadStep {
  std::vector<DirichletEntry> dirichlet;
  std::vector<NodalForce> forces;

  std::vector<DofId> constrained_dofs() const;
};

/// Face `face` of element `element`; local faces are ordered
/// x-, x+, y-, y+, z-, z+ in reference coordinates.
struct FaceRef {
  int element = 0;
  int face = 0;
};

/// Element faces lying on the plane x_axis = value.
std::vector<FaceRef> boundary_faces_on_plane(const Mesh& mesh, int axis, double value, double tol = 1e-9);

/// Consistent nodal forces of a uniform traction (MPa) on the given faces.
std::vector<NodalForce> traction_loads(const Mesh& mesh, std::span<const FaceRef> faces, const Vec3& traction);

/// Throws lcf::Error when the constrained dofs of `step` leave a rigid-body
/// mode free.
void check_rigid_body_restraint(const Mesh& mesh, const LoadStep& step);

/// Turns the prescribed displacements on `released` into nodal forces equal
/// to their current reactions and ramps those forces to zero over
/// `n_substeps` steps. The constraints are absent from every returned step.
std::vector<LoadStep> release_dirichlet(const LoadStep& current, std::span<const DofId> released,
                                        const Eigen::VectorXd& internal_force, int n_substeps);

struct GaussPointRecord {
  PlasticState plastic;
  DamageState damage;
  SymTensor3 strain;
  SymTensor3 sigma_eff;
  SymTensor3 sigma;
};

struct SolverOptions {
  double newton_rtol = 1e-8;
  double newton_atol = 1e-9;  // N
  int max_newton = 30;
  double stagger_energy_tol = 1e-6;
  double stagger_field_tol = 1e-8;
  int max_outer = 50;
  /// B-bar element: the volumetric strain at each Gauss point is replaced by
  /// its element average, which removes volumetric locking under isochoric
  /// plastic flow. Off gives the plain fully integrated hex8.
  bool mean_dilatation = false;
  ReturnMapOptions return_map;
};

struct StepReport {
  int outer_iterations = 0;
  int newton_iterations = 0;
  std::vector<double> field_increments;
  std::vector<double> energy_increments;
  std::vector<double> equilibrium_residuals;
};

/// Raised when the stagger between equilibrium and the nonlocal field does
/// not settle; carries both increment histories.
class StaggerError : public ConvergenceError {
 public:
  StaggerError(const std::string& what, StepReport report)
      : ConvergenceError(what, report.field_increments.empty() ? 0.0 : report.field_increments.back()),
        report_(std::move(report)) {}
  const StepReport& report() const { return report_; }

 private:
  StepReport report_;
};

struct EquilibriumAssembly {
  /// Tangent stiffness with constrained rows and columns replaced by identity.
  SparseMatrix stiffness;
  Eigen::VectorXd internal_force;
  /// internal - external, zero at constrained dofs.
  Eigen::VectorXd residual;
  /// K_fc * du_c for the prescribed increment passed to the assembler.
  Eigen::VectorXd constraint_coupling;
  std::vector<GaussPointRecord> trial;
};

/// Quasi-static small-strain solver on hex8 meshes coupling the momentum
/// balance with the nonlocal plastic-variable field. Each step alternates
/// (a) Newton equilibrium with the nonlocal field frozen, (b) a Helmholtz
/// solve with the updated Gauss-point k, (c) a damage update from the
/// interpolated field, until both increments settle. History is committed
/// only on convergence. One instance per simulation.
class NonlocalSolver {
 public:
  NonlocalSolver(Mesh mesh, MaterialParams material, SolverOptions opts = {});
  NonlocalSolver(Mesh mesh, std::vector<MaterialParams> materials, SolverOptions opts = {});

  ~NonlocalSolver();
  NonlocalSolver(const NonlocalSolver&) = delete;
  NonlocalSolver& operator=(const NonlocalSolver&) = delete;

  StepReport staggered_step(const LoadStep& step);

  /// Internal force, residual and tangent at displacement `u` starting from
  /// the committed history. `damage_driver` is k at the Gauss points
  /// (element-major). `prescribed_increment` feeds `constraint_coupling`.
  EquilibriumAssembly assemble_equilibrium(const Eigen::VectorXd& u, std::span<const double> damage_driver,
                                           const LoadStep& step,
                                           const Eigen::VectorXd* prescribed_increment = nullptr) const;

  const Mesh& mesh() const { return mesh_; }
  const Eigen::VectorXd& displacement() const { return u_; }
  const Eigen::VectorXd& kbar() const { return kbar_; }
  const Eigen::VectorXd& internal_force() const { return f_int_; }
  const std::vector<GaussPointRecord>& records() const { return records_; }
  const LoadStep& last_step() const { return last_step_; }
  double ell() const { return helmholtz_.ell(); }

  /// Sum of internal forces over `dofs` (the reaction for constrained dofs).
  double force_sum(std::span<const DofId> dofs) const;

  /// Nodal table "node_id x y z ux uy uz kbar" followed by the Gauss-point
  /// table "elem gp k d_i d_u".
  void write_snapshot(std::ostream& out) const;

 private:
  struct ElementCache {
    std::array<ShapeEval, 8> shape;
    std::array<BMatrix, 8> B;
  };

  Eigen::VectorXd external_force(const LoadStep& step) const;
  int solve_equilibrium(Eigen::VectorXd& u, std::span<const double> driver, const LoadStep& step,
                        EquilibriumAssembly& out, double& last_residual);

  Mesh mesh_;
  std::vector<MaterialParams> materials_;
  SolverOptions opts_;
  HelmholtzSolver helmholtz_;
  std::vector<ElementCache> cache_;
  SparseMatrix pattern_;
  std::vector<std::array<int, 576>> slots_;
  struct Factorization;
  std::unique_ptr<Factorization> lu_;

  Eigen::VectorXd u_;
  Eigen::VectorXd kbar_;
  Eigen::VectorXd f_int_;
  std::vector<GaussPointRecord> records_;
  LoadStep last_step_;
};

}  // namespace lcf::fem
