#include "lcf/material.hpp"

#include <algorithm>

#include "lcf/error.hpp"

namespace lcf {

void MaterialParams::validate() const {
  plasticity.validate();
  damage.isotropic.validate();
  damage.unilateral.validate();
  activation.validate();
  if (!(ell >= 0.0)) throw ContractViolation("characteristic length must be >= 0");
}

namespace presets {

namespace {

PlasticityParams calibrated_plasticity() {
  PlasticityParams p;
  p.elastic = {75000.0, 0.334};
  p.iso = {215.0, 230.0, 25.0};
  p.kinematic = {{2500.0, 25.0}, {60000.0, 550.0}};
  return p;
}

}  // namespace

DamageLaws dogbone_damage() {
  return {{0.825, 0.775, 0.005, 10.0, 50.0, kIntegrityFloor}, {0.825, 0.025, 0.005, 10.0, 11.0, kIntegrityFloor}};
}

DamageLaws compact_tension_damage() {
  return {{0.825, 0.775, 0.005, 0.250, 0.800, kIntegrityFloor},
          {0.825, 0.025, 0.005, 0.500, 4.000, kIntegrityFloor}};
}

MaterialParams dogbone() {
  MaterialParams m;
  m.plasticity = calibrated_plasticity();
  m.damage = dogbone_damage();
  m.activation = {1.0, -20000.0};
  m.ell = 12.5;
  return m;
}

MaterialParams compact_tension() {
  MaterialParams m = dogbone();
  m.damage = compact_tension_damage();
  m.ell = 0.75;
  return m;
}

PlasticityParams kinematic_demo(DemoHardening kind) {
  PlasticityParams p;
  p.elastic = {75000.0, 0.334};
  p.iso = IsotropicHardening::perfect(235.0);
  switch (kind) {
    case DemoHardening::none:
      break;
    case DemoHardening::prager:
      p.kinematic = {{7500.0, 0.0}};
      break;
    case DemoHardening::armstrong_frederick:
      p.kinematic = {{7500.0, 100.0}};
      break;
  }
  return p;
}

}  // namespace presets

PointResponse evaluate_point(const PlasticState& state, const DamageState& committed, const SymTensor3& strain,
                             const MaterialParams& params, std::optional<double> k_nonlocal,
                             const ReturnMapOptions& opts) {
  PointResponse out;
  out.plastic = integrate(state, strain, params.plasticity, opts);
  if (params.damage_enabled) {
    const double driver = k_nonlocal ? std::max(*k_nonlocal, 0.0) : out.plastic.state.k;
    out.damage = update_damage(committed, driver, params.damage);
  } else {
    out.damage = committed;
  }
  const SymTensor3& se = out.plastic.sigma_eff;
  out.sigma = map_stress(se, out.damage.d_i, out.damage.d_u, params.activation);
  out.tangent = map_stress_jacobian(se, out.damage.d_i, out.damage.d_u, params.activation) * out.plastic.tangent;
  return out;
}

}  // namespace lcf
