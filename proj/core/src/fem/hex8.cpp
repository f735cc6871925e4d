#include "lcf/fem/hex8.hpp"

#include <cmath>
#include <string>

#include "lcf/error.hpp"

namespace lcf::fem {

const std::array<Vec3, 8>& reference_corners() {
  static const std::array<Vec3, 8> corners = {
      Vec3(-1, -1, -1), Vec3(1, -1, -1), Vec3(1, 1, -1), Vec3(-1, 1, -1),
      Vec3(-1, -1, 1),  Vec3(1, -1, 1),  Vec3(1, 1, 1),  Vec3(-1, 1, 1)};
  return corners;
}

const std::array<Vec3, 8>& gauss_points() {
  static const std::array<Vec3, 8> points = [] {
    const double g = 1.0 / std::sqrt(3.0);
    std::array<Vec3, 8> p;
    const auto& c = reference_corners();
    for (std::size_t a = 0; a < 8; ++a) p[a] = g * c[a];
    return p;
  }();
  return points;
}

ShapeEval shape_eval(const std::array<Vec3, 8>& coords, const Vec3& xi, long element_id) {
  const auto& c = reference_corners();
  ShapeEval out;
  ShapeGradients dN_dxi;
  for (std::size_t a = 0; a < 8; ++a) {
    const double fx = 1.0 + c[a][0] * xi[0];
    const double fy = 1.0 + c[a][1] * xi[1];
    const double fz = 1.0 + c[a][2] * xi[2];
    out.N[a] = 0.125 * fx * fy * fz;
    dN_dxi(static_cast<Eigen::Index>(a), 0) = 0.125 * c[a][0] * fy * fz;
    dN_dxi(static_cast<Eigen::Index>(a), 1) = 0.125 * fx * c[a][1] * fz;
    dN_dxi(static_cast<Eigen::Index>(a), 2) = 0.125 * fx * fy * c[a][2];
  }
  Mat3 J = Mat3::Zero();  // J(i, j) = d x_j / d xi_i
  for (std::size_t a = 0; a < 8; ++a) J += dN_dxi.row(static_cast<Eigen::Index>(a)).transpose() * coords[a].transpose();
  out.detJ = J.determinant();
  const double scale = std::pow(J.cwiseAbs().maxCoeff(), 3);
  if (!(out.detJ > 1e-12 * scale))
    throw Error("element " + std::to_string(element_id) + ": non-positive Jacobian determinant " +
                std::to_string(out.detJ));
  out.dN_dx = dN_dxi * J.inverse().transpose();
  return out;
}

BMatrix strain_operator(const ShapeGradients& g) {
  BMatrix B = BMatrix::Zero();
  for (int a = 0; a < 8; ++a) {
    const int c = 3 * a;
    B(0, c) = g(a, 0);
    B(1, c + 1) = g(a, 1);
    B(2, c + 2) = g(a, 2);
    B(3, c) = g(a, 1);
    B(3, c + 1) = g(a, 0);
    B(4, c + 1) = g(a, 2);
    B(4, c + 2) = g(a, 1);
    B(5, c) = g(a, 2);
    B(5, c + 2) = g(a, 0);
  }
  return B;
}

}  // namespace lcf::fem
