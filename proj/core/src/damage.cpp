#include "lcf/damage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lcf/error.hpp"

namespace lcf {

void TrilinearLaw::validate() const {
  if (!(w_min > 0.0 && w_min <= w2 && w2 <= w1 && w1 <= 1.0))
    throw ContractViolation("trilinear law requires 0 < w_min <= w2 <= w1 <= 1");
  if (!(k1 >= 0.0 && k1 <= k2 && k2 <= k3)) throw ContractViolation("trilinear law requires 0 <= k1 <= k2 <= k3");
}

TrilinearLaw TrilinearLaw::linear_unit() {
  // Every breakpoint sits on w = 1 - k, the last one at the floor.
  return {0.5, 0.25, 0.5, 0.75, 1.0 - kIntegrityFloor, kIntegrityFloor};
}

TrilinearLaw TrilinearLaw::intact() {
  const double inf = std::numeric_limits<double>::infinity();
  return {1.0, 1.0, inf, inf, inf, 1.0};
}

double integrity(const TrilinearLaw& law, double k) {
  if (!(k >= 0.0)) throw ContractViolation("damage driver must be >= 0, got " + std::to_string(k));
  const auto lerp = [](double x0, double y0, double x1, double y1, double x) {
    if (x1 <= x0) return y1;
    // Exact at both ends, so breakpoints reproduce the tabulated values.
    const double t = (x - x0) / (x1 - x0);
    return (1.0 - t) * y0 + t * y1;
  };
  double w;
  if (k <= law.k1)
    w = lerp(0.0, 1.0, law.k1, law.w1, k);
  else if (k <= law.k2)
    w = lerp(law.k1, law.w1, law.k2, law.w2, k);
  else if (k <= law.k3)
    w = lerp(law.k2, law.w2, law.k3, law.w_min, k);
  else
    w = law.w_min;
  return std::max(w, law.w_min);
}

double damage_index(const TrilinearLaw& law, double k) { return 1.0 - integrity(law, k); }

double activation(const ActivationParams& params, double p_eff) {
  if (p_eff > 0.0) return 1.0;
  if (p_eff < params.m) return 0.0;
  return 1.0 - (1.0 - std::exp(params.alpha * p_eff / params.m)) / (1.0 - std::exp(params.alpha));
}

double activation_slope(const ActivationParams& params, double p_eff) {
  if (p_eff > 0.0 || p_eff < params.m) return 0.0;
  return (params.alpha / params.m) * std::exp(params.alpha * p_eff / params.m) / (1.0 - std::exp(params.alpha));
}

void ActivationParams::validate() const {
  if (!(alpha > 0.0)) throw ContractViolation("activation curvature alpha must be positive");
  if (!(m < 0.0)) throw ContractViolation("full-closure mean stress m must be negative");
}

SymTensor3 map_stress(const SymTensor3& sigma_eff, double d_i, double d_u, const ActivationParams& act) {
  const double p = mean(sigma_eff);
  const double vol = 1.0 - activation(act, p) * d_u;
  return (1.0 - d_i) * dev(sigma_eff) + (vol * p) * SymTensor3::identity();
}

Mat6 map_stress_jacobian(const SymTensor3& sigma_eff, double d_i, double d_u, const ActivationParams& act) {
  const double p = mean(sigma_eff);
  // d/dp of (1 - phi(p) d_u) p
  const double vol = 1.0 - activation(act, p) * d_u - activation_slope(act, p) * d_u * p;
  Mat6 j = Mat6::Zero();
  for (int a = 0; a < 6; ++a) j(a, a) = 1.0 - d_i;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) j(a, b) += (vol - (1.0 - d_i)) / 3.0;
  return j;
}

SymTensor3 legacy_map_single(const SymTensor3& sigma_eff, double d) { return (1.0 - d) * sigma_eff; }

SymTensor3 legacy_map_split(const SymTensor3& sigma_eff, double d, SplitPart which) {
  switch (which) {
    case SplitPart::tensile: {
      const SymTensor3 t = tensile_part(sigma_eff);
      return (1.0 - d) * t + (sigma_eff - t);
    }
    case SplitPart::compressive: {
      const SymTensor3 c = compressive_part(sigma_eff);
      return (1.0 - d) * c + (sigma_eff - c);
    }
    case SplitPart::deviatoric:
      return (1.0 - d) * dev(sigma_eff) + mean(sigma_eff) * SymTensor3::identity();
    case SplitPart::volumetric:
      return dev(sigma_eff) + ((1.0 - d) * mean(sigma_eff)) * SymTensor3::identity();
  }
  return sigma_eff;
}

DamageState update_damage(const DamageState& state, double k_driver, const DamageLaws& laws) {
  return {std::max(state.d_i, damage_index(laws.isotropic, k_driver)),
          std::max(state.d_u, damage_index(laws.unilateral, k_driver))};
}

}  // namespace lcf
