#include <gtest/gtest.h>

#include <cmath>

#include "frontprop/configuration.hpp"

using namespace frontprop;

TEST(Configuration, DeltaAndI) {
  const auto d = ParticleConfiguration::delta(3);
  EXPECT_EQ(d.front, 3);
  EXPECT_TRUE(d.is_finite());
  EXPECT_EQ(d.occupancy(3), 1);
  const auto I = ParticleConfiguration::I(0, 2);
  EXPECT_FALSE(I.is_finite());
  EXPECT_EQ(I.occupancy(0), 2);
  EXPECT_EQ(I.occupancy(-100), 2);
  EXPECT_EQ(I.occupancy(1), 0);
}

TEST(Configuration, MaterializeKeepsTheConfiguration) {
  const auto I = ParticleConfiguration::I(0, 1);
  const auto m = I.materialized(-10);
  EXPECT_EQ(m.explicit_count(), 11u);
  for (long x = -20; x <= 0; ++x) EXPECT_EQ(m.occupancy(x), I.occupancy(x));
  EXPECT_EQ(m.truncated().explicit_count(), 11u);
  EXPECT_FALSE(m.truncated().extension.has_value());
}

TEST(Configuration, FThetaBothWays) {
  auto w = ParticleConfiguration::delta(0);
  w.particles[{-2, 1}] = -1;
  w.particles[{-5, 1}] = -5;
  const double theta = 0.7;
  const double direct = 1 + std::exp(-theta) + std::exp(-5 * theta);
  EXPECT_NEAR(w.f_theta(theta), direct, 1e-14);
  EXPECT_NEAR(w.f_theta_by_occupancy(theta), direct, 1e-14);
  // phi counts by birth site, not position.
  EXPECT_NEAR(w.phi(-2, theta), std::exp(-theta) + std::exp(-5 * theta), 1e-14);
}

TEST(Configuration, InfiniteFThetaClosedForm) {
  const auto I = ParticleConfiguration::I(0, 3);
  const double theta = 0.4;
  EXPECT_NEAR(I.f_theta(theta), 3.0 / (1 - std::exp(-theta)), 1e-10);
}

TEST(Configuration, GrowthCondition) {
  EXPECT_EQ(check_growth_condition(EtaProfile::constant(1), 0.5).verdict, GrowthVerdict::satisfied);
  EXPECT_EQ(check_growth_condition(EtaProfile::polynomial(2.0), 0.1).verdict, GrowthVerdict::satisfied);
  EXPECT_EQ(check_growth_condition(EtaProfile::exponential(0.5), 0.3).verdict, GrowthVerdict::violated);
  EXPECT_THROW(EtaProfile::exponential(0.5).weighted_tail(0.3), DivergentSum);
}

TEST(Configuration, PolynomialCumulative) {
  const auto p = EtaProfile::polynomial(2.0, 1.0);
  for (long k : {0L, 1L, 5L, 30L}) EXPECT_NEAR(p.cumulative(k), std::floor(std::pow(k + 1.0, 2.0)), 1e-9);
}

TEST(Configuration, OplusAndValidate) {
  const auto d = ParticleConfiguration::delta(0).oplus(4);
  EXPECT_EQ(d.front, 4);
  EXPECT_EQ(d.occupancy(4), 1);
  ParticleConfiguration bad = ParticleConfiguration::delta(0);
  bad.particles[{0, 2}] = 1;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Configuration, TextRoundTrip) {
  auto w = ParticleConfiguration::I(2, 2).materialized(-3);
  w.particles[{1, 1}] = 0;
  EXPECT_EQ(ParticleConfiguration::from_text(w.to_text()), w);
  EXPECT_THROW(ParticleConfiguration::from_text("front=0\ntail=constant bogus\n"), std::invalid_argument);
}

TEST(Configuration, MWindowAndH) {
  auto w = ParticleConfiguration::delta(0);
  w.particles[{-1, 1}] = -3;
  w.particles[{-2, 1}] = -2;
  EXPECT_EQ(w.m_window(-3, 0), 2);  // (0,1) and (-2,1) sit inside (-3, 0]; (-1,1) has left it
  EXPECT_DOUBLE_EQ(w.H(-2), 2.0);
}
