#pragma once

#include <span>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "lcf/fem/mesh.hpp"

namespace lcf::fem {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Discrete form of  kbar - l^2 lap(kbar) = k  with natural (homogeneous
/// Neumann) boundaries: (M_L + l^2 D) kbar = f, where M_L is the row-sum
/// lumped mass, D the diffusion matrix and f_a = sum_gp N_a k_gp w detJ.
struct HelmholtzSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  Eigen::VectorXd lumped_mass;
};

/// `source` holds k at the Gauss points, element-major (8 per element).
HelmholtzSystem assemble_helmholtz(const Mesh& mesh, double ell, std::span<const double> source);

/// Right-hand side only; the matrix does not depend on the source.
Eigen::VectorXd helmholtz_rhs(const Mesh& mesh, std::span<const double> source);

/// Factorises the Helmholtz matrix once and solves for any source.
class HelmholtzSolver {
 public:
  HelmholtzSolver(const Mesh& mesh, double ell);

  Eigen::VectorXd solve(std::span<const double> source) const;
  const Eigen::VectorXd& lumped_mass() const { return lumped_mass_; }
  double ell() const { return ell_; }

 private:
  std::vector<std::array<int, 8>> elements_;
  double ell_;
  Eigen::VectorXd lumped_mass_;
  std::vector<double> rhs_weights_;  // N_a detJ, element-major then Gauss point then node
  Eigen::SimplicialLLT<SparseMatrix> llt_;
};

/// Nodal field sampled at the Gauss points, element-major.
std::vector<double> interpolate_to_gauss(const Mesh& mesh, const Eigen::VectorXd& nodal);

}  // namespace lcf::fem
