#include <gtest/gtest.h>

#include "lcf/error.hpp"
#include "lcf/material.hpp"

using namespace lcf;

TEST(Presets, Validate) {
  EXPECT_NO_THROW(presets::dogbone().validate());
  EXPECT_NO_THROW(presets::compact_tension().validate());
  EXPECT_DOUBLE_EQ(presets::dogbone().ell, 12.5);
  EXPECT_DOUBLE_EQ(presets::compact_tension().ell, 0.75);
  EXPECT_DOUBLE_EQ(presets::compact_tension().damage.unilateral.k3, 4.0);
  for (auto kind : {presets::DemoHardening::none, presets::DemoHardening::prager,
                    presets::DemoHardening::armstrong_frederick})
    EXPECT_NO_THROW(presets::kinematic_demo(kind).validate());
}

TEST(Presets, RejectNegativeLength) {
  auto m = presets::dogbone();
  m.ell = -1.0;
  EXPECT_THROW(m.validate(), ContractViolation);
}

TEST(EvaluatePoint, LocalDriverDamagesOnceYielded) {
  const auto p = presets::dogbone();
  const auto eps = SymTensor3::diag(0.01, -0.005, -0.005);
  const auto r = evaluate_point(PlasticState::virgin(p.plasticity), {}, eps, p);
  EXPECT_GT(r.plastic.state.k, 0.005);
  EXPECT_NEAR(r.damage.d_i, damage_index(p.damage.isotropic, r.plastic.state.k), 1e-15);
  EXPECT_NEAR(norm(r.sigma - map_stress(r.plastic.sigma_eff, r.damage.d_i, r.damage.d_u, p.activation)), 0.0, 1e-12);
}

TEST(EvaluatePoint, NonlocalDriverOverridesLocal) {
  const auto p = presets::dogbone();
  const auto eps = SymTensor3::diag(0.01, -0.005, -0.005);
  const auto r = evaluate_point(PlasticState::virgin(p.plasticity), {}, eps, p, 0.0);
  EXPECT_EQ(r.damage.d_i, 0.0);
  EXPECT_EQ(r.damage.d_u, 0.0);
  // Negative field values are clipped.
  const auto neg = evaluate_point(PlasticState::virgin(p.plasticity), {}, eps, p, -0.3);
  EXPECT_EQ(neg.damage.d_i, 0.0);
  // Committed damage never heals.
  const auto kept = evaluate_point(PlasticState::virgin(p.plasticity), {0.3, 0.4}, eps, p, 0.0);
  EXPECT_EQ(kept.damage.d_i, 0.3);
  EXPECT_EQ(kept.damage.d_u, 0.4);
}

TEST(EvaluatePoint, DisabledDamageKeepsEffectiveStress) {
  auto p = presets::dogbone();
  p.damage_enabled = false;
  const auto r = evaluate_point(PlasticState::virgin(p.plasticity), {}, SymTensor3::diag(0.01, -0.005, -0.005), p);
  EXPECT_EQ(r.sigma, r.plastic.sigma_eff);
}

TEST(EvaluatePoint, FrozenDamageTangentMatchesDifferences) {
  const auto p = presets::dogbone();
  // Damage already beyond what this step can produce, so it stays frozen.
  const DamageState committed{0.3, 0.35};
  PlasticState s = evaluate_point(PlasticState::virgin(p.plasticity), committed, SymTensor3::diag(0.004, -0.002, -0.002), p, 0.0)
                       .plastic.state;
  const SymTensor3 eps{0.0045, -0.0021, -0.0019, 0.0003, 0.0, -0.0001};
  const auto r = evaluate_point(s, committed, eps, p, 0.0);
  ASSERT_GT(r.plastic.dgamma, 0.0);
  Mat6 fd;
  const double h = 1e-8;
  for (int j = 0; j < 6; ++j) {
    Vec6 d = Vec6::Zero();
    d[j] = h;
    const auto plus = evaluate_point(s, committed, eps + from_strain_voigt(d), p, 0.0).sigma;
    const auto minus = evaluate_point(s, committed, eps - from_strain_voigt(d), p, 0.0).sigma;
    fd.col(j) = to_stress_voigt(plus - minus) / (2.0 * h);
  }
  EXPECT_LT((fd - r.tangent).norm(), 1e-4 * r.tangent.norm());
}
