#pragma once

#include "lcf/tensor.hpp"

namespace lcf {

/// Integrity floor applied beyond the last breakpoint.
inline constexpr double kIntegrityFloor = 1e-8;

/// Piecewise-linear integrity w(k) through (0, 1), (k1, w1), (k2, w2),
/// (k3, w_min), constant w_min afterwards.
struct TrilinearLaw {
  double w1 = 1.0;
  double w2 = 1.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double w_min = kIntegrityFloor;

  void validate() const;

  /// d(k) = k for k <= 1, then 1 (clamped to the integrity floor).
  static TrilinearLaw linear_unit();
  /// No degradation at any k.
  static TrilinearLaw intact();
};

/// Smooth crack-closure switch on the mean effective stress.
struct ActivationParams {
  double alpha = 1.0;
  double m = -1.0;  // MPa, mean effective stress at full closure

  void validate() const;
};

struct DamageState {
  double d_i = 0.0;  // isotropic (deviatoric) index
  double d_u = 0.0;  // unilateral (volumetric) index
};

struct DamageLaws {
  TrilinearLaw isotropic;
  TrilinearLaw unilateral;
};

double integrity(const TrilinearLaw& law, double k);
double damage_index(const TrilinearLaw& law, double k);

/// phi(p): 0 below m, 1 - (1 - e^{alpha p / m}) / (1 - e^alpha) on [m, 0], 1 above 0.
double activation(const ActivationParams& params, double p_eff);
/// d phi / d p.
double activation_slope(const ActivationParams& params, double p_eff);

/// Nominal stress (1 - d_i) s + (1 - phi(p) d_u) p I.
SymTensor3 map_stress(const SymTensor3& sigma_eff, double d_i, double d_u, const ActivationParams& act);

/// d sigma / d sigma_eff in Voigt form with the damage indices held fixed;
/// includes the variation of phi with the pressure.
Mat6 map_stress_jacobian(const SymTensor3& sigma_eff, double d_i, double d_u, const ActivationParams& act);

/// Single-index mapping (1 - d) sigma_eff.
SymTensor3 legacy_map_single(const SymTensor3& sigma_eff, double d);

enum class SplitPart { tensile, compressive, deviatoric, volumetric };

/// Degrades exactly one part of a two-way split and keeps the complement.
SymTensor3 legacy_map_split(const SymTensor3& sigma_eff, double d, SplitPart which);

/// Running maximum of the damage indices driven by k.
DamageState update_damage(const DamageState& state, double k_driver, const DamageLaws& laws);

}  // namespace lcf
