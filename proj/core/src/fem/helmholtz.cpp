#include "lcf/fem/helmholtz.hpp"

#include <string>

#include "lcf/error.hpp"
#include "lcf/fem/hex8.hpp"

namespace lcf::fem {

namespace {

void check_source(const Mesh& mesh, std::span<const double> source) {
  if (source.size() != 8 * mesh.num_elements())
    throw ContractViolation("Helmholtz source needs 8 Gauss values per element, got " +
                            std::to_string(source.size()));
}

}  // namespace

Eigen::VectorXd helmholtz_rhs(const Mesh& mesh, std::span<const double> source) {
  check_source(mesh, source);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto x = mesh.element_coords(e);
    for (std::size_t g = 0; g < 8; ++g) {
      const ShapeEval se = shape_eval(x, gauss_points()[g], static_cast<long>(e));
      const double kw = source[8 * e + g] * se.detJ;
      for (std::size_t a = 0; a < 8; ++a) f[mesh.elements[e][a]] += se.N[a] * kw;
    }
  }
  return f;
}

HelmholtzSystem assemble_helmholtz(const Mesh& mesh, double ell, std::span<const double> source) {
  if (!(ell >= 0.0)) throw ContractViolation("characteristic length must be >= 0");
  const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
  HelmholtzSystem sys;
  sys.lumped_mass = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(64 * mesh.num_elements() + mesh.num_nodes());
  const double l2 = ell * ell;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto x = mesh.element_coords(e);
    Eigen::Matrix<double, 8, 8> diff = Eigen::Matrix<double, 8, 8>::Zero();
    for (const auto& gp : gauss_points()) {
      const ShapeEval se = shape_eval(x, gp, static_cast<long>(e));
      diff += se.detJ * (se.dN_dx * se.dN_dx.transpose());
      for (std::size_t a = 0; a < 8; ++a) sys.lumped_mass[mesh.elements[e][a]] += se.N[a] * se.detJ;
    }
    if (l2 > 0.0) {
      for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
          trips.emplace_back(mesh.elements[e][static_cast<std::size_t>(a)], mesh.elements[e][static_cast<std::size_t>(b)],
                             l2 * diff(a, b));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) trips.emplace_back(i, i, sys.lumped_mass[i]);
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  sys.rhs = source.empty() ? Eigen::VectorXd::Zero(n) : helmholtz_rhs(mesh, source);
  return sys;
}

HelmholtzSolver::HelmholtzSolver(const Mesh& mesh, double ell) : elements_(mesh.elements), ell_(ell) {
  HelmholtzSystem sys = assemble_helmholtz(mesh, ell, {});
  lumped_mass_ = std::move(sys.lumped_mass);
  llt_.compute(sys.matrix);
  if (llt_.info() != Eigen::Success) throw Error("Helmholtz matrix is not positive definite (mesh defect?)");
  rhs_weights_.resize(64 * mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto x = mesh.element_coords(e);
    for (std::size_t g = 0; g < 8; ++g) {
      const ShapeEval se = shape_eval(x, gauss_points()[g], static_cast<long>(e));
      for (std::size_t a = 0; a < 8; ++a) rhs_weights_[64 * e + 8 * g + a] = se.N[a] * se.detJ;
    }
  }
}

Eigen::VectorXd HelmholtzSolver::solve(std::span<const double> source) const {
  if (source.size() != 8 * elements_.size())
    throw ContractViolation("Helmholtz source needs 8 Gauss values per element, got " +
                            std::to_string(source.size()));
  Eigen::VectorXd f = Eigen::VectorXd::Zero(lumped_mass_.size());
  for (std::size_t e = 0; e < elements_.size(); ++e)
    for (std::size_t g = 0; g < 8; ++g)
      for (std::size_t a = 0; a < 8; ++a)
        f[elements_[e][a]] += rhs_weights_[64 * e + 8 * g + a] * source[8 * e + g];
  Eigen::VectorXd x = llt_.solve(f);
  if (llt_.info() != Eigen::Success) throw Error("Helmholtz solve failed");
  return x;
}

std::vector<double> interpolate_to_gauss(const Mesh& mesh, const Eigen::VectorXd& nodal) {
  std::vector<double> out(8 * mesh.num_elements(), 0.0);
  // Shape values at Gauss points do not depend on geometry.
  static const auto shape = [] {
    std::array<std::array<double, 8>, 8> s{};
    const auto& c = reference_corners();
    for (std::size_t g = 0; g < 8; ++g)
      for (std::size_t a = 0; a < 8; ++a) {
        const Vec3& xi = gauss_points()[g];
        s[g][a] = 0.125 * (1 + c[a][0] * xi[0]) * (1 + c[a][1] * xi[1]) * (1 + c[a][2] * xi[2]);
      }
    return s;
  }();
  for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    for (std::size_t g = 0; g < 8; ++g) {
      double v = 0.0;
      for (std::size_t a = 0; a < 8; ++a) v += shape[g][a] * nodal[mesh.elements[e][a]];
      out[8 * e + g] = v;
    }
  return out;
}

}  // namespace lcf::fem
