#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "frontprop/randomness.hpp"

using namespace frontprop;

// Known-answer vectors published with the Random123 reference implementation.
TEST(Philox, KnownAnswers) {
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RandomField, PureFunctionOfSeedAndKey) {
  RandomField f(42), g(42), h(43);
  const StreamKey k{{-3, 2}, 7, Channel::clock, Stream::base()};
  EXPECT_EQ(f.draw(k), g.draw(k));
  EXPECT_NE(f.draw(k), h.draw(k));
  const WalkDraw d = f.walk_draw({-3, 2}, 7);
  EXPECT_EQ(d.clock, f.draw(k));
  EXPECT_EQ(d.step_unif, f.draw({{-3, 2}, 7, Channel::step, Stream::base()}));
}

TEST(RandomField, StreamsAndBirthplacesAreDistinct) {
  RandomField f(1);
  std::set<double> seen;
  for (long x = -5; x <= 5; ++x)
    for (int i = 1; i <= 3; ++i)
      for (std::uint32_t s = 0; s < 3; ++s) {
        const Stream st = s == 0 ? Stream::base() : Stream::fresh(s - 1);
        seen.insert(f.walk_draw({x, i}, 1, st).clock);
      }
  EXPECT_EQ(seen.size(), 11u * 3u * 3u);
  EXPECT_NE(f.auxiliary_uniform(0, 0), f.walk_draw({0, 0}, 0).step_unif);
  EXPECT_TRUE(Stream::fresh(0) != Stream::base());
  EXPECT_EQ(Stream::auxiliary(5).id(), 0x80000005u);
}

TEST(RandomField, ClockIsExponentialRateTwo) {
  RandomField f(9);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int k = 1; k <= n; ++k) {
    const double c = f.walk_draw({0, 1}, static_cast<std::uint64_t>(k)).clock;
    ASSERT_GT(c, 0.0);
    s += c;
    s2 += c * c;
  }
  const double mean = s / n;
  EXPECT_NEAR(mean, 0.5, 4 * 0.5 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 0.5, 0.01);  // E[tau^2] = 2 / 4
}

TEST(RandomField, StepUniformsAreUniform) {
  RandomField f(10);
  const int n = 100000;
  int below = 0;
  for (int k = 1; k <= n; ++k) below += f.walk_draw({k, 1}, 1).step_unif < 0.3;
  EXPECT_NEAR(below / static_cast<double>(n), 0.3, 4 * std::sqrt(0.21 / n));
}

TEST(StepSign, RuleAndValidation) {
  EXPECT_EQ(step_sign(0.5, 0.0), 1);
  EXPECT_EQ(step_sign(0.50001, 0.0), -1);
  EXPECT_EQ(step_sign(0.55, 0.1), 1);
  EXPECT_THROW(step_sign(0.2, 0.5), std::invalid_argument);
  EXPECT_THROW(step_sign(0.2, -0.1), std::invalid_argument);
}

TEST(WalkPath, HorizonAndSteps) {
  RandomField f(3);
  const Trajectory p = walk_path(f, {0, 1}, 0.1, {std::nullopt, 10.0});
  ASSERT_GE(p.times.size(), 1u);
  EXPECT_LE(p.times.back(), 10.0);
  for (std::size_t k = 1; k < p.times.size(); ++k) {
    EXPECT_GT(p.times[k], p.times[k - 1]);
    EXPECT_EQ(std::abs(p.positions[k] - p.positions[k - 1]), 1);
  }
  const Trajectory q = walk_path(f, {0, 1}, 0.1, {5, std::nullopt});
  EXPECT_EQ(q.times.size(), 6u);
  for (std::size_t k = 0; k < q.times.size() && k < p.times.size(); ++k) EXPECT_EQ(q.times[k], p.times[k]);
  EXPECT_THROW(walk_path(f, {0, 1}, 0.0, {}), std::invalid_argument);
}
