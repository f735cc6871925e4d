#pragma once

#include <array>

#include "lcf/tensor.hpp"

namespace lcf::fem {

using ShapeGradients = Eigen::Matrix<double, 8, 3>;
using BMatrix = Eigen::Matrix<double, 6, 24>;

/// Trilinear shape functions and their physical gradients at one point.
struct ShapeEval {
  std::array<double, 8> N{};
  ShapeGradients dN_dx = ShapeGradients::Zero();
  double detJ = 0.0;
};

/// Reference coordinates of the eight corners.
const std::array<Vec3, 8>& reference_corners();

/// 2x2x2 Gauss points; every weight is 1.
const std::array<Vec3, 8>& gauss_points();

/// Evaluates shape functions at `xi` in [-1, 1]^3. Throws lcf::Error naming
/// `element_id` when the Jacobian is singular or inverted.
ShapeEval shape_eval(const std::array<Vec3, 8>& coords, const Vec3& xi, long element_id = -1);

/// Small-strain operator mapping element displacements (node-major, xyz)
/// to engineering Voigt strain.
BMatrix strain_operator(const ShapeGradients& dN_dx);

}  // namespace lcf::fem
