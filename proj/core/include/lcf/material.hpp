#pragma once

#include <optional>

#include "lcf/damage.hpp"
#include "lcf/plasticity.hpp"

namespace lcf {

/// Full plastic-damage parameter record.
struct MaterialParams {
  PlasticityParams plasticity;
  DamageLaws damage{TrilinearLaw::intact(), TrilinearLaw::intact()};
  ActivationParams activation{1.0, -20000.0};
  /// Characteristic length of the nonlocal field, mm.
  double ell = 0.0;
  bool damage_enabled = true;

  void validate() const;
};

namespace presets {

/// EN AW-7020 T6 dog-bone calibration: elastic, Voce and two-term Chaboche
/// parameters with the dog-bone damage laws and l = 12.5 mm.
MaterialParams dogbone();

/// Same plasticity with the compact-tension damage laws and l = 0.75 mm.
MaterialParams compact_tension();

/// Damage laws of the dog-bone calibration.
DamageLaws dogbone_damage();
/// Damage laws of the compact-tension calibration.
DamageLaws compact_tension_damage();

/// Hypothetical material of the kinematic-hardening demonstration
/// (E = 75 GPa, nu = 0.334, sigma_y = 235 MPa, constant yield stress).
enum class DemoHardening { none, prager, armstrong_frederick };
PlasticityParams kinematic_demo(DemoHardening kind);

}  // namespace presets

/// Constitutive response at one point: effective-configuration plasticity
/// followed by the two-index damage mapping.
struct PointResponse {
  UpdateResult plastic;
  DamageState damage;
  SymTensor3 sigma;  // nominal
  Mat6 tangent = Mat6::Zero();  // nominal, damage and activation frozen
};

/// Evaluates the material at total strain `strain`. The damage driver is
/// the updated local k unless `k_nonlocal` is given. Damage only grows
/// relative to `committed`.
PointResponse evaluate_point(const PlasticState& state, const DamageState& committed, const SymTensor3& strain,
                             const MaterialParams& params, std::optional<double> k_nonlocal = std::nullopt,
                             const ReturnMapOptions& opts = {});

}  // namespace lcf
