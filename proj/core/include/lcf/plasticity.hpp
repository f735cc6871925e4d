#pragma once

#include <vector>

#include "lcf/hardening.hpp"
#include "lcf/tensor.hpp"

namespace lcf {

struct ElasticConstants {
  double E = 0.0;   // MPa
  double nu = 0.0;

  void validate() const;
  double shear() const { return E / (2.0 * (1.0 + nu)); }
  double bulk() const { return E / (3.0 * (1.0 - 2.0 * nu)); }
  Mat6 stiffness() const { return isotropic_stiffness(bulk(), shear()); }
};

/// Everything the effective-configuration integrator needs.
struct PlasticityParams {
  ElasticConstants elastic;
  IsotropicHardening iso;
  ChabocheSet kinematic;

  void validate() const;
};

/// History at one material point. `strain` is the total strain of the last
/// converged update; the effective stress is C : (strain - eps_p).
struct PlasticState {
  SymTensor3 strain;
  SymTensor3 eps_p;
  double k = 0.0;
  std::vector<SymTensor3> backstresses;

  static PlasticState virgin(const PlasticityParams& params);
  SymTensor3 total_backstress() const;
};

struct UpdateResult {
  PlasticState state;
  SymTensor3 sigma_eff;
  double dgamma = 0.0;
  /// d sigma_eff / d eps in Voigt form (engineering shear strain columns).
  Mat6 tangent = Mat6::Zero();
  int iterations = 0;
  int substeps = 1;
};

struct ReturnMapOptions {
  /// Yield tolerance relative to sigma0: converged when |Phi| <= tol * sigma0.
  double tol = 1e-8;
  int max_iter = 50;
  /// On Newton failure the increment is halved, at most this many times.
  int max_bisections = 10;
};

SymTensor3 elastic_stress(const ElasticConstants& el, const SymTensor3& elastic_strain);

/// sqrt(3 J2(sigma - beta)) - sigma_y(k).
double yield_function(const SymTensor3& sigma_eff, const SymTensor3& beta_total, double k,
                      const IsotropicHardening& iso);

/// Backward-Euler return mapping from `state` to total strain `strain_new`.
///
/// The Armstrong-Frederick updates are eliminated analytically, leaving one
/// scalar equation in the plastic multiplier increment that is solved by
/// Newton iteration safeguarded with bisection on [0, dgamma_max]. The
/// returned tangent is the consistent linearisation of that update.
///
/// Throws ContractViolation for non-finite input and ConvergenceError when
/// the Newton solve fails even after bisecting the increment.
UpdateResult integrate(const PlasticState& state, const SymTensor3& strain_new, const PlasticityParams& params,
                       const ReturnMapOptions& opts = {});

/// Explicit forward-Euler reference integrator with `n_sub` uniform
/// sub-increments and a consistent drift correction back onto the yield
/// surface after every sub-increment. Slow; used as an oracle.
UpdateResult substep_integrate(const PlasticState& state, const SymTensor3& strain_new,
                               const PlasticityParams& params, int n_sub);

}  // namespace lcf
