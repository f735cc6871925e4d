#pragma once

#include <vector>

namespace lcf {

/// Voce-type saturating yield stress, sigma0 -> sigmaInf at rate a.
struct IsotropicHardening {
  double sigma0 = 0.0;    // MPa
  double sigmaInf = 0.0;  // MPa
  double a = 0.0;

  /// Throws ContractViolation unless sigma0 > 0, sigmaInf >= sigma0, a >= 0.
  void validate() const;

  /// Non-hardening yield stress.
  static IsotropicHardening perfect(double sigma_y) { return {sigma_y, sigma_y, 0.0}; }
};

/// One Armstrong-Frederick term: dbeta = 2/3 h deps_p - dgamma b beta.
/// b = 0 is the linear Prager rule.
struct BackstressComponent {
  double h = 0.0;  // MPa
  double b = 0.0;
};

using ChabocheSet = std::vector<BackstressComponent>;

void validate(const ChabocheSet& set);

double yield_stress(const IsotropicHardening& iso, double k);
double yield_stress_slope(const IsotropicHardening& iso, double k);

/// Sum h_k / b_k: the uniaxial flow-stress contribution of the backstresses
/// once they have saturated under monotonic flow. Throws if any b_k is zero.
double saturated_backstress_amplitude(const ChabocheSet& set);

}  // namespace lcf
