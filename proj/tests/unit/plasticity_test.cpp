#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "lcf/error.hpp"
#include "lcf/material.hpp"
#include "lcf/plasticity.hpp"
#include "random_paths.hpp"

using namespace lcf;

namespace {

PlasticityParams calibrated() { return presets::dogbone().plasticity; }

double rel_diff(const SymTensor3& a, const SymTensor3& b) { return norm(a - b) / std::max(norm(b), 1e-300); }

/// Walks `path` and returns the state before the last point together with it.
std::pair<PlasticState, SymTensor3> state_before_last(const std::vector<SymTensor3>& path, const PlasticityParams& p) {
  PlasticState s = PlasticState::virgin(p);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) s = integrate(s, path[i], p).state;
  return {s, path.back()};
}

}  // namespace

TEST(YieldFunction, Examples) {
  const auto iso = calibrated().iso;
  EXPECT_NEAR(yield_function(SymTensor3::diag(215.0, 0.0, 0.0), {}, 0.0, iso), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(yield_function({}, {}, 0.0, iso), -215.0);
  EXPECT_NEAR(yield_function(500.0 * SymTensor3::identity(), {}, 0.0, iso), -215.0, 1e-12);
  // Backstress shifts the surface centre.
  EXPECT_NEAR(yield_function(SymTensor3::diag(315.0, 0.0, 0.0), dev(SymTensor3::diag(100.0, 0.0, 0.0)), 0.0, iso),
              0.0, 1e-12);
}

TEST(Integrate, ElasticUniaxialStep) {
  const auto p = calibrated();
  const auto r = integrate(PlasticState::virgin(p), SymTensor3::diag(0.001, -0.000334, -0.000334), p);
  EXPECT_NEAR(r.sigma_eff[0], 75.0, 1e-9);
  EXPECT_NEAR(r.sigma_eff[1], 0.0, 1e-9);
  EXPECT_EQ(r.dgamma, 0.0);
  EXPECT_EQ(r.state.k, 0.0);
  EXPECT_LT((r.tangent - p.elastic.stiffness()).norm(), 1e-9);
}

TEST(Integrate, ZeroIncrementLeavesStateUnchanged) {
  const auto p = calibrated();
  std::mt19937 rng(1);
  const auto path = test_support::random_plastic_path(rng, p, 3, 2e-3);
  PlasticState s = PlasticState::virgin(p);
  for (const auto& e : path) s = integrate(s, e, p).state;
  const auto again = integrate(s, s.strain, p);
  EXPECT_EQ(again.dgamma, 0.0);
  EXPECT_EQ(again.state.eps_p, s.eps_p);
  EXPECT_EQ(again.state.k, s.k);
  const auto sub = substep_integrate(s, s.strain, p, 7);
  EXPECT_EQ(sub.state.eps_p, s.eps_p);
  EXPECT_EQ(sub.state.k, s.k);
}

TEST(Integrate, RejectsNonFiniteInput) {
  const auto p = calibrated();
  SymTensor3 bad = SymTensor3::diag(0.001, 0.0, 0.0);
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(integrate(PlasticState::virgin(p), bad, p), ContractViolation);
  bad[3] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(substep_integrate(PlasticState::virgin(p), bad, p, 10), ContractViolation);
  EXPECT_THROW(substep_integrate(PlasticState::virgin(p), SymTensor3{}, p, 0), ContractViolation);
}

TEST(Integrate, NonConvergenceCarriesResidual) {
  const auto p = calibrated();
  ReturnMapOptions opts;
  opts.max_iter = 1;
  opts.max_bisections = 0;
  try {
    integrate(PlasticState::virgin(p), SymTensor3::diag(0.05, -0.025, -0.025), p, opts);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(std::abs(e.last_residual()), 0.0);
  }
  // Bisection recovers a step that a single Newton pass cannot.
  opts.max_iter = 4;
  opts.max_bisections = 10;
  const auto r = integrate(PlasticState::virgin(p), SymTensor3::diag(0.05, -0.025, -0.025), p, opts);
  EXPECT_GT(r.substeps, 1);
}

TEST(Integrate, KuhnTuckerIsochoricDeviatoricBackstress) {
  const auto p = calibrated();
  const ReturnMapOptions opts;
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const auto path = test_support::random_plastic_path(rng, p, 5, 2e-3);
    PlasticState s = PlasticState::virgin(p);
    for (const auto& e : path) {
      const auto r = integrate(s, e, p, opts);
      const double phi = yield_function(r.sigma_eff, r.state.total_backstress(), r.state.k, p.iso);
      EXPECT_LE(phi, opts.tol * p.iso.sigma0);
      EXPECT_GE(r.dgamma, 0.0);
      EXPECT_LE(std::abs(phi * r.dgamma), opts.tol * p.iso.sigma0 * r.dgamma + 1e-300);
      EXPECT_LE(std::abs(trace(r.state.eps_p)), 1e-10);
      for (const auto& b : r.state.backstresses) EXPECT_LE(std::abs(trace(b)), 1e-10);
      EXPECT_GE(r.state.k, s.k);
      s = r.state;
    }
  }
}

TEST(Integrate, RadialUnloadingIsElastic) {
  const auto p = calibrated();
  std::mt19937 rng(77);
  const Mat6 C = p.elastic.stiffness();
  for (int trial = 0; trial < 20; ++trial) {
    const auto path = test_support::random_plastic_path(rng, p, 3, 2e-3);
    PlasticState s = PlasticState::virgin(p);
    SymTensor3 sig;
    for (const auto& e : path) {
      const auto r = integrate(s, e, p);
      s = r.state;
      sig = r.sigma_eff;
    }
    const SymTensor3 back = -1e-6 * (path.back() - path[path.size() - 2]) / norm(path.back() - path[path.size() - 2]);
    const auto u = integrate(s, s.strain + back, p);
    EXPECT_EQ(u.dgamma, 0.0);
    const Vec6 expected = C * to_strain_voigt(back);
    EXPECT_LT((to_stress_voigt(u.sigma_eff - sig) - expected).norm(), 1e-6 * expected.norm());
  }
}

TEST(Integrate, TangentMatchesCentralDifferences) {
  const auto p = calibrated();
  std::mt19937 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const auto [s, eps] = state_before_last(test_support::random_plastic_path(rng, p, 3, 1e-3), p);
    const auto r = integrate(s, eps, p);
    ASSERT_GT(r.dgamma, 0.0);
    Mat6 fd;
    const double h = 1e-8;
    for (int j = 0; j < 6; ++j) {
      Vec6 d = Vec6::Zero();
      d[j] = h;
      const auto plus = integrate(s, eps + from_strain_voigt(d), p).sigma_eff;
      const auto minus = integrate(s, eps - from_strain_voigt(d), p).sigma_eff;
      fd.col(j) = to_stress_voigt(plus - minus) / (2.0 * h);
    }
    EXPECT_LT((fd - r.tangent).norm(), 1e-4 * r.tangent.norm()) << "trial " << trial;
  }
}

TEST(Integrate, TangentSymmetricForProportionalLoading) {
  const auto p = calibrated();
  const SymTensor3 dir = dev(SymTensor3{1.0, -0.3, 0.2, 0.4, -0.1, 0.25});
  PlasticState s = PlasticState::virgin(p);
  UpdateResult r;
  for (int i = 1; i <= 20; ++i) {
    r = integrate(s, (5e-3 * i / 20.0) * dir / norm(dir), p);
    s = r.state;
  }
  ASSERT_GT(r.dgamma, 0.0);
  EXPECT_LT((r.tangent - r.tangent.transpose()).norm(), 1e-8 * r.tangent.norm());
}

TEST(SubstepIntegrate, ElasticStepIdenticalToImplicit) {
  const auto p = calibrated();
  const auto e = SymTensor3{0.001, -0.0003, 0.0002, 0.0004, 0.0, -0.0001};
  const auto a = integrate(PlasticState::virgin(p), e, p);
  const auto b = substep_integrate(PlasticState::virgin(p), e, p, 1);
  EXPECT_EQ(a.sigma_eff, b.sigma_eff);
  EXPECT_EQ(b.dgamma, 0.0);
}

TEST(SubstepIntegrate, AgreesWithImplicitOnSmallSteps) {
  const auto p = calibrated();
  std::mt19937 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto path = test_support::random_plastic_path(rng, p, 3, 1e-4);
    PlasticState a = integrate(PlasticState::virgin(p), path[0], p).state;
    PlasticState b = a;
    SymTensor3 sa, sb;
    for (std::size_t i = 1; i < path.size(); ++i) {
      const auto ra = integrate(a, path[i], p);
      const auto rb = substep_integrate(b, path[i], p, 100000);
      a = ra.state;
      b = rb.state;
      sa = ra.sigma_eff;
      sb = rb.sigma_eff;
    }
    EXPECT_LT(rel_diff(sa, sb), 1e-3);
    EXPECT_LE(std::abs(trace(b.eps_p)), 1e-10);
  }
}

TEST(Reductions, PerfectPlasticityHoldsYieldStress) {
  PlasticityParams p;
  p.elastic = {75000.0, 0.334};
  p.iso = IsotropicHardening::perfect(235.0);
  const SymTensor3 dir = dev(SymTensor3{1.0, -0.5, -0.5, 0.2, 0.0, 0.0});
  PlasticState s = PlasticState::virgin(p);
  for (int i = 1; i <= 50; ++i) {
    const auto r = integrate(s, (0.02 * i / 50.0) * dir / norm(dir), p);
    s = r.state;
    if (r.dgamma > 0.0) EXPECT_NEAR(von_mises(r.sigma_eff), 235.0, 1e-6);
  }
  EXPECT_GT(s.k, 0.0);
}

TEST(Reductions, PragerBackstressTracksPlasticStrain) {
  const auto p = presets::kinematic_demo(presets::DemoHardening::prager);
  const SymTensor3 dir = dev(SymTensor3{1.0, -0.5, -0.5, 0.0, 0.0, 0.0});
  PlasticState s = PlasticState::virgin(p);
  for (int i = 1; i <= 40; ++i) s = integrate(s, (0.02 * i / 40.0) * dir / norm(dir), p).state;
  // Linear rule under proportional flow: beta = 2/3 h eps_p.
  EXPECT_LT(norm(s.backstresses[0] - (2.0 / 3.0) * 7500.0 * s.eps_p), 1e-9 * norm(s.backstresses[0]));
}

TEST(Validation, ElasticConstants) {
  EXPECT_THROW((ElasticConstants{0.0, 0.3}.validate()), ContractViolation);
  EXPECT_THROW((ElasticConstants{1.0, 0.5}.validate()), ContractViolation);
  EXPECT_THROW((ElasticConstants{1.0, -1.0}.validate()), ContractViolation);
  EXPECT_NO_THROW((ElasticConstants{75000.0, 0.334}.validate()));
}
