#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lcf/driver/csv.hpp"
#include "lcf/driver/protocol.hpp"
#include "lcf/material.hpp"

namespace lcf::driver {

/// State of one increment of a uniaxial-stress material point.
struct PointSample {
  double axial_strain = 0.0;
  double stress = 0.0;      // nominal, axial
  double stress_eff = 0.0;  // effective, axial
  double k = 0.0;
  double d_i = 0.0;
  double d_u = 0.0;
  double dgamma = 0.0;
  double phi = 0.0;         // yield function after the update
  double trace_eps_p = 0.0;
  double lateral_residual = 0.0;  // largest |sigma| among the non-axial components
};

/// Material point driven by the axial strain with all other stress
/// components held at zero. The lateral strains are found by Newton
/// iteration on the frozen-damage tangent; an increment that fails to
/// converge is split in half, recursively.
class UniaxialStressPoint {
 public:
  explicit UniaxialStressPoint(MaterialParams params, ReturnMapOptions opts = {});

  /// Moves to `axial_strain` and commits the converged state.
  PointSample advance(double axial_strain);

  const MaterialParams& params() const { return params_; }
  const PlasticState& plastic() const { return plastic_; }
  const DamageState& damage() const { return damage_; }
  const SymTensor3& strain() const { return strain_; }
  const SymTensor3& stress() const { return sigma_; }
  /// d sigma_axial / d eps_axial with the lateral stresses kept at zero.
  double axial_tangent() const;

 private:
  bool try_advance(double axial_strain, PointSample& out);

  MaterialParams params_;
  ReturnMapOptions opts_;
  PlasticState plastic_;
  DamageState damage_;
  SymTensor3 strain_;
  SymTensor3 sigma_;
  Mat6 tangent_;
};

struct MatpointOptions {
  ReturnMapOptions return_map;
  int max_cycles = 0;  // 0 keeps the protocol's count
};

struct MatpointRow {
  int step = 0;
  int cycle = 0;
  double time = 0.0;
  PointSample sample;
  double unloading_slope = 0.0;  // latest estimate, NaN before the first
};

struct CycleSummary {
  int cycle = 0;
  double peak_stress = 0.0;  // at the maximum strain
  double min_stress = 0.0;   // at the minimum strain
  double unloading_slope = 0.0;
  double k = 0.0;
  double d_i = 0.0;
  double d_u = 0.0;
};

struct MatpointHistory {
  std::vector<MatpointRow> rows;
  std::vector<CycleSummary> cycles;

  Table rows_table() const;
  Table cycles_table() const;
};

/// Secant slope from the peak over the first tenth of the unloading branch.
MatpointHistory run_matpoint(const MaterialParams& params, const CycleProtocol& protocol,
                             const MatpointOptions& opts = {});

}  // namespace lcf::driver
