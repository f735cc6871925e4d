#pragma once

#include <array>
#include <cmath>

#include <Eigen/Dense>

namespace lcf {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Symmetric second-order tensor in 3D stored as six tensor components in
/// the order xx, yy, zz, xy, yz, zx.
///
/// Components are true tensor components: a shear strain stored here is
/// eps_xy, not the engineering gamma_xy = 2 eps_xy. Double contraction
/// (`contract`) accounts for the off-diagonal pairs explicitly. The only
/// place engineering shear appears is the Voigt strain vector produced by
/// `to_strain_voigt`, which is what the 6x6 tangent operators act on.
///
/// Units follow the housed quantity: MPa for stresses, dimensionless for
/// strains; lengths elsewhere in the library are mm.
struct SymTensor3 {
  enum Index { XX = 0, YY = 1, ZZ = 2, XY = 3, YZ = 4, ZX = 5 };

  std::array<double, 6> c{};

  constexpr SymTensor3() = default;
  constexpr SymTensor3(double xx, double yy, double zz, double xy, double yz, double zx)
      : c{xx, yy, zz, xy, yz, zx} {}

  static constexpr SymTensor3 zero() { return {}; }
  static constexpr SymTensor3 identity() { return {1.0, 1.0, 1.0, 0.0, 0.0, 0.0}; }
  static constexpr SymTensor3 diag(double a, double b, double d) { return {a, b, d, 0.0, 0.0, 0.0}; }

  constexpr double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  constexpr double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  /// Component (i, j) of the full 3x3 matrix.
  double operator()(int i, int j) const;
  Mat3 matrix() const;
  static SymTensor3 from_matrix(const Mat3& m);

  SymTensor3& operator+=(const SymTensor3& o);
  SymTensor3& operator-=(const SymTensor3& o);
  SymTensor3& operator*=(double s);
  SymTensor3& operator/=(double s);

  bool all_finite() const;

  friend bool operator==(const SymTensor3&, const SymTensor3&) = default;
};

SymTensor3 operator+(SymTensor3 a, const SymTensor3& b);
SymTensor3 operator-(SymTensor3 a, const SymTensor3& b);
SymTensor3 operator-(SymTensor3 a);
SymTensor3 operator*(SymTensor3 a, double s);
SymTensor3 operator*(double s, SymTensor3 a);
SymTensor3 operator/(SymTensor3 a, double s);

double trace(const SymTensor3& t);
/// Mean (hydrostatic) part, trace / 3.
double mean(const SymTensor3& t);
SymTensor3 dev(const SymTensor3& t);
/// Double contraction A:B, counting each off-diagonal pair twice.
double contract(const SymTensor3& a, const SymTensor3& b);
/// Frobenius norm sqrt(T:T).
double norm(const SymTensor3& t);
/// Second deviatoric invariant, 1/2 dev(T):dev(T).
double j2(const SymTensor3& t);
/// sqrt(3 J2), the von Mises equivalent.
double von_mises(const SymTensor3& t);

/// Macaulay bracket: 0 for x <= 0, x otherwise.
constexpr double ramp(double x) { return x > 0.0 ? x : 0.0; }

/// Outer product e (x) e as a symmetric tensor.
SymTensor3 dyad(const Vec3& e);

/// R T R^T.
SymTensor3 rotate(const SymTensor3& t, const Mat3& r);

struct PrincipalDecomposition {
  /// Principal values, descending.
  std::array<double, 3> values{};
  /// directions[k] belongs to values[k]; orthonormal.
  std::array<Vec3, 3> directions{};

  SymTensor3 reassemble() const;
};

/// Spectral decomposition by cyclic Jacobi rotations. A tensor that is
/// already diagonal is returned with coordinate-axis directions, and ties
/// keep their axis order, so repeated eigenvalues give a deterministic basis.
PrincipalDecomposition principal(const SymTensor3& t);

/// Sum of <lambda_k> e_k (x) e_k.
SymTensor3 tensile_part(const SymTensor3& t);
/// -Sum of <-lambda_k> e_k (x) e_k.
SymTensor3 compressive_part(const SymTensor3& t);

// Voigt conversions. Stress vectors carry tensor shear components; strain
// vectors carry engineering shear (2 eps_ij), so that sigma . eps is work.
Vec6 to_stress_voigt(const SymTensor3& s);
SymTensor3 from_stress_voigt(const Vec6& v);
Vec6 to_strain_voigt(const SymTensor3& e);
SymTensor3 from_strain_voigt(const Vec6& v);

/// Isotropic elasticity matrix mapping engineering strain to stress.
Mat6 isotropic_stiffness(double bulk, double shear);

}  // namespace lcf
