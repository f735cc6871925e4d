#include <cmath>

#include <gtest/gtest.h>

#include "lcf/driver/protocol.hpp"
#include "lcf/error.hpp"

using namespace lcf;
using namespace lcf::driver;

TEST(Frequency, FromRate) {
  EXPECT_EQ(frequency_from_rate(0.004, 0.015), 1.0 / 15.0);
  EXPECT_DOUBLE_EQ(frequency_from_rate(0.004, 0.001), 1.0);
  EXPECT_EQ(frequency_from_rate(0.0, 0.015), 0.0);
  EXPECT_THROW(frequency_from_rate(0.004, 0.0), ContractViolation);
}

TEST(Protocol, FullyReversedShape) {
  CycleProtocol p;
  p.amplitude = 0.015;
  p.cycles = 3;
  p.points_per_quarter = 5;
  const auto h = strain_history(p);
  ASSERT_EQ(h.size(), 3u * 4u * 5u);
  double hi = -1.0, lo = 1.0;
  for (const auto& pt : h) {
    hi = std::max(hi, pt.strain);
    lo = std::min(lo, pt.strain);
  }
  EXPECT_DOUBLE_EQ(hi, 0.015);
  EXPECT_DOUBLE_EQ(lo, -0.015);
  EXPECT_EQ(h.back().strain, 0.0);
  EXPECT_EQ(h.front().cycle, 1);
  EXPECT_EQ(h.back().cycle, 3);
  // One cycle lasts 1/f.
  EXPECT_NEAR(h.back().time, 3.0 / frequency_from_rate(p.strain_rate, p.amplitude), 1e-9);
}

TEST(Protocol, ZeroMeanStrainPerCycle) {
  CycleProtocol p;
  p.amplitude = 0.015;
  p.cycles = 4;
  for (int ppq : {4, 7, 20, 33}) {
    p.points_per_quarter = ppq;
    const auto h = strain_history(p);
    for (int c = 1; c <= p.cycles; ++c) EXPECT_NEAR(cycle_mean_strain(h, c), 0.0, 1e-12) << "ppq " << ppq;
  }
}

TEST(Protocol, PulsatingRatio) {
  CycleProtocol p;
  p.amplitude = 0.005;
  p.ratio = 0.0;
  p.points_per_quarter = 8;
  EXPECT_DOUBLE_EQ(p.max_strain(), 0.01);
  EXPECT_DOUBLE_EQ(p.min_strain(), 0.0);
  const auto h = strain_history(p);
  EXPECT_NEAR(cycle_mean_strain(h, 1), 0.005, 1e-12);
}

TEST(Protocol, Validation) {
  CycleProtocol p;
  p.points_per_quarter = 3;
  EXPECT_THROW(p.validate(), ContractViolation);
  p = {};
  p.amplitude = 0.0;
  EXPECT_THROW(p.validate(), ContractViolation);
  p = {};
  p.cycles = 0;
  EXPECT_THROW(p.validate(), ContractViolation);
  p = {};
  p.ratio = 1.0;
  EXPECT_THROW(p.validate(), ContractViolation);
  EXPECT_THROW(cycle_mean_strain(strain_history(CycleProtocol{}), 5), ContractViolation);
}
