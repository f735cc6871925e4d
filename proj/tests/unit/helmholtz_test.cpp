#include <random>

#include <gtest/gtest.h>

#include "box_mesh.hpp"
#include "lcf/error.hpp"
#include "lcf/fem/helmholtz.hpp"
#include "lcf/fem/hex8.hpp"

using namespace lcf;
using namespace lcf::fem;

namespace {

Mesh distorted_box() {
  Mesh m = test_support::box_mesh(3.0, 2.0, 1.0, 3, 2, 2);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-0.12, 0.12);
  const auto [lo, hi] = m.bounds();
  for (auto& x : m.nodes) {
    bool interior = true;
    for (int d = 0; d < 3; ++d) interior = interior && x[d] > lo[d] + 1e-9 && x[d] < hi[d] - 1e-9;
    if (interior) x += Vec3(u(rng), u(rng), u(rng));
  }
  return m;
}

std::vector<double> random_source(const Mesh& m, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> s(8 * m.num_elements());
  for (auto& v : s) v = u(rng);
  return s;
}

double integral(const Mesh& m, const std::vector<double>& gp_values) {
  double sum = 0.0;
  for (std::size_t e = 0; e < m.num_elements(); ++e)
    for (std::size_t g = 0; g < 8; ++g) sum += gp_values[8 * e + g] * shape_eval(m.element_coords(e), gauss_points()[g]).detJ;
  return sum;
}

}  // namespace

TEST(Helmholtz, UniformSourceIsReproduced) {
  const Mesh m = distorted_box();
  for (double ell : {0.0, 0.5, 2.0, 10.0}) {
    const HelmholtzSolver solver(m, ell);
    const std::vector<double> src(8 * m.num_elements(), 0.37);
    const auto kbar = solver.solve(src);
    EXPECT_LT((kbar.array() - 0.37).abs().maxCoeff(), 1e-10) << "ell = " << ell;
  }
}

TEST(Helmholtz, VolumeMeanPreserved) {
  const Mesh m = distorted_box();
  const auto src = random_source(m, 8);
  const HelmholtzSolver solver(m, 1.5);
  const auto kbar = solver.solve(src);
  const double mass_weighted = solver.lumped_mass().dot(kbar);
  const double exact = integral(m, src);
  EXPECT_NEAR(mass_weighted, exact, 1e-8 * std::abs(exact));
  // The interpolated field integrates to the same value.
  EXPECT_NEAR(integral(m, interpolate_to_gauss(m, kbar)), exact, 1e-8 * std::abs(exact));
}

TEST(Helmholtz, DiscreteMaximumPrinciple) {
  const Mesh m = test_support::box_mesh(4.0, 2.0, 1.0, 8, 4, 2);
  const auto src = random_source(m, 12);
  const double smax = *std::max_element(src.begin(), src.end());
  const double smin = *std::min_element(src.begin(), src.end());
  for (double ell : {0.1, 1.0, 5.0}) {
    const auto kbar = HelmholtzSolver(m, ell).solve(src);
    EXPECT_LE(kbar.maxCoeff(), smax + 1e-8);
    EXPECT_GE(kbar.minCoeff(), smin - 1e-8);
  }
}

TEST(Helmholtz, VanishingLengthGivesLumpedProjection) {
  const Mesh m = distorted_box();
  const auto src = random_source(m, 3);
  const HelmholtzSolver solver(m, 1e-6 * 1.0);
  const auto kbar = solver.solve(src);
  const Eigen::VectorXd proj = helmholtz_rhs(m, src).cwiseQuotient(solver.lumped_mass());
  EXPECT_LT((kbar - proj).cwiseAbs().maxCoeff(), 1e-4 * proj.cwiseAbs().maxCoeff());
}

TEST(Helmholtz, TwoElementBarMatchesHandSolution) {
  // Two unit cubes along x, source 1 in the first. With the lumped mass the
  // field only varies in x and reduces to the 3x3 system
  //   [[1/2 + l2, -l2, 0], [-l2, 1 + 2 l2, -l2], [0, -l2, 1/2 + l2]] kbar = [1/2, 1/2, 0],
  // whose solution for l2 = 1/4 is (5/6, 1/2, 1/6).
  const Mesh m = test_support::box_mesh(2.0, 1.0, 1.0, 2, 1, 1);
  std::vector<double> src(16, 0.0);
  for (int g = 0; g < 8; ++g) src[static_cast<std::size_t>(g)] = 1.0;
  const auto kbar = HelmholtzSolver(m, 0.5).solve(src);
  const double expected[3] = {5.0 / 6.0, 0.5, 1.0 / 6.0};
  for (std::size_t n = 0; n < m.num_nodes(); ++n) {
    const int col = static_cast<int>(std::lround(m.nodes[n][0]));
    EXPECT_NEAR(kbar[static_cast<Eigen::Index>(n)], expected[col], 1e-10) << "node " << n;
  }
}

TEST(Helmholtz, AssembledSystemIsSymmetric) {
  const Mesh m = distorted_box();
  const auto sys = assemble_helmholtz(m, 1.2, random_source(m, 1));
  EXPECT_LT((SparseMatrix(sys.matrix.transpose()) - sys.matrix).norm(), 1e-12 * sys.matrix.norm());
  EXPECT_NEAR(sys.lumped_mass.sum(), integral(m, std::vector<double>(8 * m.num_elements(), 1.0)), 1e-12);
}

TEST(Helmholtz, RejectsBadInput) {
  const Mesh m = test_support::box_mesh(1.0, 1.0, 1.0, 1, 1, 1);
  EXPECT_THROW(HelmholtzSolver(m, -1.0), ContractViolation);
  EXPECT_THROW(HelmholtzSolver(m, 1.0).solve(std::vector<double>(7, 0.0)), ContractViolation);
  Mesh orphan = m;
  orphan.nodes.emplace_back(5.0, 5.0, 5.0);
  EXPECT_THROW(HelmholtzSolver(orphan, 1.0), Error);
}
