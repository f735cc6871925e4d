#include "lcf/fem/solver.hpp"

#include <Eigen/SparseLU>
#ifdef LCF_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace lcf::fem {

namespace {

constexpr int kMaxCorrectionCuts = 8;

// Local corner indices of each face, and the fixed reference axis/sign.
constexpr int kFaceNodes[6][4] = {{0, 3, 7, 4}, {1, 2, 6, 5}, {0, 1, 5, 4}, {3, 2, 6, 7}, {0, 1, 2, 3}, {4, 5, 6, 7}};
constexpr int kFaceAxis[6] = {0, 0, 1, 1, 2, 2};
constexpr double kFaceSign[6] = {-1, 1, -1, 1, -1, 1};

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

std::vector<DofId> LoadStep::constrained_dofs() const {
  std::vector<DofId> out;
  out.reserve(dirichlet.size());
  for (const auto& d : dirichlet) out.push_back({d.node, d.dir});
  return out;
}

std::vector<FaceRef> boundary_faces_on_plane(const Mesh& mesh, int axis, double value, double tol) {
  std::vector<FaceRef> out;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    for (int f = 0; f < 6; ++f) {
      bool on = true;
      for (int a : kFaceNodes[f])
        on = on && std::abs(mesh.nodes[static_cast<std::size_t>(mesh.elements[e][static_cast<std::size_t>(a)])][axis] - value) <= tol;
      if (on) out.push_back({static_cast<int>(e), f});
    }
  }
  return out;
}

std::vector<NodalForce> traction_loads(const Mesh& mesh, std::span<const FaceRef> faces, const Vec3& traction) {
  std::map<DofId, double> acc;
  const double g = 1.0 / std::sqrt(3.0);
  const auto& corners = reference_corners();
  for (const auto& fr : faces) {
    const auto x = mesh.element_coords(static_cast<std::size_t>(fr.element));
    const int fixed = kFaceAxis[fr.face];
    const int u_ax = (fixed + 1) % 3;
    const int v_ax = (fixed + 2) % 3;
    for (double su : {-g, g}) {
      for (double sv : {-g, g}) {
        Vec3 xi = Vec3::Zero();
        xi[fixed] = kFaceSign[fr.face];
        xi[u_ax] = su;
        xi[v_ax] = sv;
        Vec3 dxdu = Vec3::Zero();
        Vec3 dxdv = Vec3::Zero();
        std::array<double, 8> N{};
        for (std::size_t a = 0; a < 8; ++a) {
          const Vec3& c = corners[a];
          const double f0 = 1 + c[0] * xi[0], f1 = 1 + c[1] * xi[1], f2 = 1 + c[2] * xi[2];
          const std::array<double, 3> fac{f0, f1, f2};
          N[a] = 0.125 * f0 * f1 * f2;
          const double du = 0.125 * c[u_ax] * fac[static_cast<std::size_t>(v_ax)] * fac[static_cast<std::size_t>(fixed)];
          const double dv = 0.125 * c[v_ax] * fac[static_cast<std::size_t>(u_ax)] * fac[static_cast<std::size_t>(fixed)];
          dxdu += du * x[a];
          dxdv += dv * x[a];
        }
        const double area = dxdu.cross(dxdv).norm();
        for (int a : kFaceNodes[fr.face]) {
          const int node = mesh.elements[static_cast<std::size_t>(fr.element)][static_cast<std::size_t>(a)];
          for (int d = 0; d < 3; ++d) acc[{node, d}] += N[static_cast<std::size_t>(a)] * area * traction[d];
        }
      }
    }
  }
  std::vector<NodalForce> out;
  for (const auto& [dof, v] : acc)
    if (v != 0.0) out.push_back({dof.node, dof.dir, v});
  return out;
}

void check_rigid_body_restraint(const Mesh& mesh, const LoadStep& step) {
  const auto dofs = step.constrained_dofs();
  if (dofs.empty()) throw Error("singular system: no displacement constraints, rigid-body motion is free");
  const auto [lo, hi] = mesh.bounds();
  const Vec3 centre = 0.5 * (lo + hi);
  const double scale = std::max((hi - lo).norm(), 1e-12);
  Eigen::MatrixXd modes(static_cast<Eigen::Index>(dofs.size()), 6);
  for (std::size_t r = 0; r < dofs.size(); ++r) {
    const Vec3 x = (mesh.nodes[static_cast<std::size_t>(dofs[r].node)] - centre) / scale;
    for (int m = 0; m < 3; ++m) {
      Vec3 t = Vec3::Zero();
      t[m] = 1.0;
      modes(static_cast<Eigen::Index>(r), m) = t[dofs[r].dir];
      modes(static_cast<Eigen::Index>(r), 3 + m) = t.cross(x)[dofs[r].dir];
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(modes);
  lu.setThreshold(1e-10);
  if (lu.rank() < 6)
    throw Error("singular system: constraints leave " + std::to_string(6 - lu.rank()) + " rigid-body mode(s) free");
}

std::vector<LoadStep> release_dirichlet(const LoadStep& current, std::span<const DofId> released,
                                        const Eigen::VectorXd& internal_force, int n_substeps) {
  if (n_substeps < 1) throw ContractViolation("release needs at least one substep");
  std::set<DofId> rel(released.begin(), released.end());
  LoadStep base;
  std::set<DofId> found;
  for (const auto& d : current.dirichlet) {
    if (rel.count({d.node, d.dir}))
      found.insert({d.node, d.dir});
    else
      base.dirichlet.push_back(d);
  }
  if (found.size() != rel.size()) throw ContractViolation("release targets a displacement constraint that is not active");
  base.forces = current.forces;

  std::vector<LoadStep> out;
  out.reserve(static_cast<std::size_t>(n_substeps));
  for (int j = 1; j <= n_substeps; ++j) {
    LoadStep s = base;
    const double scale = 1.0 - static_cast<double>(j) / n_substeps;
    for (const auto& d : rel) {
      const double f = scale * internal_force[d.index()];
      if (j < n_substeps) s.forces.push_back({d.node, d.dir, f});
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Sparse LU of the tangent; the symbolic analysis is done once since the
/// pattern never changes.
struct NonlocalSolver::Factorization {
#ifdef LCF_HAVE_UMFPACK
  Eigen::UmfPackLU<SparseMatrix> lu;
#else
  Eigen::SparseLU<SparseMatrix> lu;
#endif
  bool analyzed = false;

  Eigen::VectorXd solve(const SparseMatrix& k, const Eigen::VectorXd& rhs) {
    if (!analyzed) {
      lu.analyzePattern(k);
      analyzed = true;
    }
    lu.factorize(k);
    if (lu.info() != Eigen::Success) throw Error("singular system: tangent stiffness factorisation failed");
    Eigen::VectorXd x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite())
      throw Error("singular system: non-finite displacement correction");
    return x;
  }
};

NonlocalSolver::~NonlocalSolver() = default;

NonlocalSolver::NonlocalSolver(Mesh mesh, MaterialParams material, SolverOptions opts)
    : NonlocalSolver(std::move(mesh), std::vector<MaterialParams>{std::move(material)}, opts) {}

NonlocalSolver::NonlocalSolver(Mesh mesh, std::vector<MaterialParams> materials, SolverOptions opts)
    : mesh_(std::move(mesh)),
      materials_(std::move(materials)),
      opts_(opts),
      helmholtz_(mesh_, materials_.empty() ? 0.0 : materials_.front().ell),
      lu_(std::make_unique<Factorization>()) {
  if (materials_.empty()) throw ContractViolation("solver needs at least one material");
  for (const auto& m : materials_) {
    m.validate();
    if (m.ell != materials_.front().ell) throw ContractViolation("all materials must share one characteristic length");
  }
  mesh_.validate();
  for (int tag : mesh_.material)
    if (tag < 0 || static_cast<std::size_t>(tag) >= materials_.size())
      throw ContractViolation("mesh material tag " + std::to_string(tag) + " has no parameter set");

  cache_.resize(mesh_.num_elements());
  for (std::size_t e = 0; e < mesh_.num_elements(); ++e) {
    const auto x = mesh_.element_coords(e);
    for (std::size_t g = 0; g < 8; ++g) {
      cache_[e].shape[g] = shape_eval(x, gauss_points()[g], static_cast<long>(e));
      cache_[e].B[g] = strain_operator(cache_[e].shape[g].dN_dx);
    }
    if (opts_.mean_dilatation) {
      // Replace the dilatation of every Gauss point by the element average.
      Eigen::Matrix<double, 1, 24> mean_vol = Eigen::Matrix<double, 1, 24>::Zero();
      double volume = 0.0;
      for (std::size_t g = 0; g < 8; ++g) {
        const double w = cache_[e].shape[g].detJ;
        mean_vol += w * cache_[e].B[g].topRows<3>().colwise().sum();
        volume += w;
      }
      mean_vol /= volume;
      for (auto& B : cache_[e].B) {
        const Eigen::Matrix<double, 1, 24> shift = (mean_vol - B.topRows<3>().colwise().sum()) / 3.0;
        B.topRows<3>().rowwise() += shift;
      }
    }
  }

  const auto ndof = static_cast<Eigen::Index>(mesh_.num_dofs());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(576 * mesh_.num_elements() + mesh_.num_dofs());
  for (const auto& conn : mesh_.elements)
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            trips.emplace_back(3 * conn[static_cast<std::size_t>(a)] + i, 3 * conn[static_cast<std::size_t>(b)] + j, 0.0);
  for (Eigen::Index i = 0; i < ndof; ++i) trips.emplace_back(i, i, 0.0);
  pattern_.resize(ndof, ndof);
  pattern_.setFromTriplets(trips.begin(), trips.end());
  pattern_.makeCompressed();

  const auto slot = [&](int row, int col) {
    const int* inner = pattern_.innerIndexPtr();
    const int begin = pattern_.outerIndexPtr()[col];
    const int end = pattern_.outerIndexPtr()[col + 1];
    return static_cast<int>(std::lower_bound(inner + begin, inner + end, row) - inner);
  };
  slots_.resize(mesh_.num_elements());
  for (std::size_t e = 0; e < mesh_.num_elements(); ++e) {
    const auto& conn = mesh_.elements[e];
    for (int p = 0; p < 24; ++p)
      for (int q = 0; q < 24; ++q)
        slots_[e][static_cast<std::size_t>(24 * p + q)] =
            slot(3 * conn[static_cast<std::size_t>(p / 3)] + p % 3, 3 * conn[static_cast<std::size_t>(q / 3)] + q % 3);
  }

  u_ = Eigen::VectorXd::Zero(ndof);
  f_int_ = Eigen::VectorXd::Zero(ndof);
  kbar_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh_.num_nodes()));
  records_.resize(8 * mesh_.num_elements());
  for (std::size_t e = 0; e < mesh_.num_elements(); ++e)
    for (std::size_t g = 0; g < 8; ++g)
      records_[8 * e + g].plastic = PlasticState::virgin(materials_[static_cast<std::size_t>(mesh_.material[e])].plasticity);
}

Eigen::VectorXd NonlocalSolver::external_force(const LoadStep& step) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh_.num_dofs()));
  for (const auto& nf : step.forces) f[3 * nf.node + nf.dir] += nf.value;
  return f;
}

EquilibriumAssembly NonlocalSolver::assemble_equilibrium(const Eigen::VectorXd& u, std::span<const double> damage_driver,
                                                         const LoadStep& step,
                                                         const Eigen::VectorXd* prescribed_increment) const {
  const auto ndof = static_cast<Eigen::Index>(mesh_.num_dofs());
  if (u.size() != ndof) throw ContractViolation("displacement vector has the wrong size");
  if (damage_driver.size() != records_.size()) throw ContractViolation("damage driver needs one value per Gauss point");

  std::vector<char> constrained(static_cast<std::size_t>(ndof), 0);
  for (const auto& d : step.dirichlet) constrained[static_cast<std::size_t>(3 * d.node + d.dir)] = 1;

  EquilibriumAssembly out;
  out.stiffness = pattern_;
  double* values = out.stiffness.valuePtr();
  std::fill(values, values + out.stiffness.nonZeros(), 0.0);
  out.internal_force = Eigen::VectorXd::Zero(ndof);
  out.constraint_coupling = Eigen::VectorXd::Zero(ndof);
  out.trial.resize(records_.size());

  for (std::size_t e = 0; e < mesh_.num_elements(); ++e) {
    const auto& conn = mesh_.elements[e];
    const MaterialParams& mat = materials_[static_cast<std::size_t>(mesh_.material[e])];
    Eigen::Matrix<double, 24, 1> ue;
    for (std::size_t a = 0; a < 8; ++a)
      for (int i = 0; i < 3; ++i) ue[static_cast<Eigen::Index>(3 * a) + i] = u[3 * conn[a] + i];

    Eigen::Matrix<double, 24, 1> fe = Eigen::Matrix<double, 24, 1>::Zero();
    Eigen::Matrix<double, 24, 24> ke = Eigen::Matrix<double, 24, 24>::Zero();
    for (std::size_t g = 0; g < 8; ++g) {
      const std::size_t gp = 8 * e + g;
      const BMatrix& B = cache_[e].B[g];
      const double w = cache_[e].shape[g].detJ;
      const SymTensor3 strain = from_strain_voigt(B * ue);
      PointResponse resp;
      try {
        resp = evaluate_point(records_[gp].plastic, records_[gp].damage, strain, mat, damage_driver[gp],
                              opts_.return_map);
      } catch (const ConvergenceError& err) {
        std::ostringstream msg;
        msg << "element " << e << " Gauss point " << g << ": " << err.what();
        throw ConvergenceError(msg.str(), err.last_residual());
      }
      fe += w * (B.transpose() * to_stress_voigt(resp.sigma));
      ke += w * (B.transpose() * resp.tangent * B);
      auto& rec = out.trial[gp];
      rec.plastic = std::move(resp.plastic.state);
      rec.damage = resp.damage;
      rec.strain = strain;
      rec.sigma_eff = resp.plastic.sigma_eff;
      rec.sigma = resp.sigma;
    }

    const auto& slots = slots_[e];
    for (int p = 0; p < 24; ++p) {
      const int row = 3 * conn[static_cast<std::size_t>(p / 3)] + p % 3;
      out.internal_force[row] += fe[p];
      const bool row_c = constrained[static_cast<std::size_t>(row)];
      for (int q = 0; q < 24; ++q) {
        const int col = 3 * conn[static_cast<std::size_t>(q / 3)] + q % 3;
        const bool col_c = constrained[static_cast<std::size_t>(col)];
        if (row_c || col_c) {
          if (!row_c && prescribed_increment) out.constraint_coupling[row] += ke(p, q) * (*prescribed_increment)[col];
          continue;
        }
        values[slots[static_cast<std::size_t>(24 * p + q)]] += ke(p, q);
      }
    }
  }
  for (const auto& d : step.dirichlet) out.stiffness.coeffRef(3 * d.node + d.dir, 3 * d.node + d.dir) = 1.0;

  out.residual = out.internal_force - external_force(step);
  for (Eigen::Index i = 0; i < ndof; ++i)
    if (constrained[static_cast<std::size_t>(i)]) out.residual[i] = 0.0;
  return out;
}

int NonlocalSolver::solve_equilibrium(Eigen::VectorXd& u, std::span<const double> driver, const LoadStep& step,
                                      EquilibriumAssembly& out, double& last_residual) {
  const auto ndof = static_cast<Eigen::Index>(mesh_.num_dofs());
  Eigen::VectorXd du_c = Eigen::VectorXd::Zero(ndof);
  const auto remaining = [&] {
    du_c.setZero();
    for (const auto& d : step.dirichlet) du_c[3 * d.node + d.dir] = d.value - u[3 * d.node + d.dir];
    return du_c.cwiseAbs().maxCoeff() > 0.0;
  };
  const double f_ext_norm = external_force(step).norm();

  bool pending = remaining();
  out = assemble_equilibrium(u, driver, step, pending ? &du_c : nullptr);
  for (int it = 0;; ++it) {
    last_residual = out.residual.norm();
    const double scale = std::max(out.internal_force.norm(), f_ext_norm);
    if (!pending && last_residual <= opts_.newton_rtol * scale + opts_.newton_atol) return it;
    if (it == opts_.max_newton) break;

    Eigen::VectorXd rhs = -out.residual - out.constraint_coupling;
    for (const auto& d : step.dirichlet) rhs[3 * d.node + d.dir] = du_c[3 * d.node + d.dir];
    Eigen::VectorXd delta = lu_->solve(out.stiffness, rhs);

    // Shorten the correction while some Gauss point cannot be returned.
    const Eigen::VectorXd saved = u;
    for (int cut = 0;; ++cut) {
      u = saved + delta;
      pending = remaining();
      try {
        out = assemble_equilibrium(u, driver, step, pending ? &du_c : nullptr);
        break;
      } catch (const ConvergenceError&) {
        if (cut == kMaxCorrectionCuts) {
          u = saved;
          throw;
        }
        delta *= 0.5;
      }
    }
  }
  std::ostringstream msg;
  msg << "equilibrium Newton did not converge in " << opts_.max_newton << " iterations (residual " << last_residual
      << " N)";
  throw ConvergenceError(msg.str(), last_residual);
}

StepReport NonlocalSolver::staggered_step(const LoadStep& step) {
  check_rigid_body_restraint(mesh_, step);
  StepReport report;
  Eigen::VectorXd u = u_;
  Eigen::VectorXd kbar = kbar_;
  Eigen::VectorXd u_prev = u_;
  EquilibriumAssembly eq;
  bool converged = false;

  for (int outer = 1; outer <= opts_.max_outer; ++outer) {
    const std::vector<double> driver = interpolate_to_gauss(mesh_, kbar);
    double residual = 0.0;
    report.newton_iterations += solve_equilibrium(u, driver, step, eq, residual);
    report.equilibrium_residuals.push_back(residual);

    std::vector<double> source(eq.trial.size());
    for (std::size_t i = 0; i < source.size(); ++i) source[i] = eq.trial[i].plastic.k;
    const Eigen::VectorXd kbar_new = helmholtz_.solve(source);

    const double field_inc = max_abs(kbar_new - kbar) / std::max(1.0, max_abs(kbar_new));
    double energy_inc = 0.0;
    if (outer > 1) {
      const double work = std::abs((u - u_).dot(eq.internal_force));
      energy_inc = std::abs((u - u_prev).dot(eq.internal_force)) / std::max(work, 1e-300);
      if (work == 0.0) energy_inc = 0.0;
    }
    report.field_increments.push_back(field_inc);
    report.energy_increments.push_back(energy_inc);
    report.outer_iterations = outer;
    kbar = kbar_new;
    u_prev = u;
    if (field_inc <= opts_.stagger_field_tol && energy_inc <= opts_.stagger_energy_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "staggered scheme did not converge in " << opts_.max_outer << " outer iterations (field increment "
        << report.field_increments.back() << ", energy increment " << report.energy_increments.back() << ")";
    throw StaggerError(msg.str(), std::move(report));
  }

  u_ = std::move(u);
  kbar_ = std::move(kbar);
  f_int_ = std::move(eq.internal_force);
  records_ = std::move(eq.trial);
  last_step_ = step;
  return report;
}

double NonlocalSolver::force_sum(std::span<const DofId> dofs) const {
  double s = 0.0;
  for (const auto& d : dofs) s += f_int_[d.index()];
  return s;
}

void NonlocalSolver::write_snapshot(std::ostream& out) const {
  char buf[64];
  const auto num = [&](double v) {
    const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
  };
  out << "node_id x y z ux uy uz kbar\n";
  for (std::size_t n = 0; n < mesh_.num_nodes(); ++n) {
    const auto& x = mesh_.nodes[n];
    const auto i = static_cast<Eigen::Index>(3 * n);
    out << n << ' ' << num(x[0]) << ' ' << num(x[1]) << ' ' << num(x[2]) << ' ' << num(u_[i]) << ' '
        << num(u_[i + 1]) << ' ' << num(u_[i + 2]) << ' ' << num(kbar_[static_cast<Eigen::Index>(n)]) << '\n';
  }
  out << "elem gp k d_i d_u\n";
  for (std::size_t gp = 0; gp < records_.size(); ++gp) {
    const auto& r = records_[gp];
    out << gp / 8 << ' ' << gp % 8 << ' ' << num(r.plastic.k) << ' ' << num(r.damage.d_i) << ' '
        << num(r.damage.d_u) << '\n';
  }
}

}  // namespace lcf::fem
