#include "lcf/hardening.hpp"

#include <cmath>
#include <string>

#include "lcf/error.hpp"

namespace lcf {

namespace {

void require_k(double k) {
  if (!(k >= 0.0)) throw ContractViolation("plastic internal variable must be >= 0, got " + std::to_string(k));
}

}  // namespace

void IsotropicHardening::validate() const {
  if (!(sigma0 > 0.0)) throw ContractViolation("sigma0 must be positive");
  if (!(sigmaInf >= sigma0)) throw ContractViolation("sigmaInf must be >= sigma0");
  if (!(a >= 0.0)) throw ContractViolation("saturation rate a must be >= 0");
}

void validate(const ChabocheSet& set) {
  for (const auto& c : set) {
    if (!(c.h >= 0.0) || !(c.b >= 0.0))
      throw ContractViolation("backstress moduli h and b must be >= 0");
  }
}

double yield_stress(const IsotropicHardening& iso, double k) {
  require_k(k);
  return iso.sigma0 + (iso.sigmaInf - iso.sigma0) * (1.0 - std::exp(-iso.a * k));
}

double yield_stress_slope(const IsotropicHardening& iso, double k) {
  require_k(k);
  return iso.a * (iso.sigmaInf - iso.sigma0) * std::exp(-iso.a * k);
}

double saturated_backstress_amplitude(const ChabocheSet& set) {
  double sum = 0.0;
  for (const auto& c : set) {
    if (c.b <= 0.0) throw ContractViolation("backstress with b = 0 has no saturation value");
    sum += c.h / c.b;
  }
  return sum;
}

}  // namespace lcf
