#include <gtest/gtest.h>

#include <cmath>

#include "frontprop/hitting.hpp"
#include "frontprop/simulator.hpp"

using namespace frontprop;

TEST(WalkHit, AgreesWithWalkPath) {
  RandomField f(21);
  for (long target : {1L, 3L, 6L}) {
    const HitResult h = walk_hit(f, {0, 1}, 0.05, 0, target, 1u << 20);
    ASSERT_TRUE(h.time.has_value());
    const Trajectory p = walk_path(f, {0, 1}, 0.05, {h.steps, std::nullopt});
    EXPECT_EQ(p.positions.back(), target);
    EXPECT_NEAR(p.times.back(), *h.time, 1e-12);
    for (std::size_t k = 0; k + 1 < p.positions.size(); ++k) EXPECT_LT(p.positions[k], target);
  }
}

TEST(WalkHit, CapReportsLowerBound) {
  RandomField f(22);
  const HitResult h = walk_hit(f, {0, 1}, 0.0, 0, 1000, 50);
  EXPECT_FALSE(h.time.has_value());
  EXPECT_EQ(h.steps, 50u);
  EXPECT_GT(h.elapsed_at_cap, 0.0);
}

TEST(WalkLadder, ReachIsMonotone) {
  RandomField f(23);
  WalkLadder ladder(f, {0, 1}, 0.1, 0, Stream::base());
  double prev = 0.0;
  for (long level = 1; level <= 8; ++level) {
    const auto t = ladder.reach(level, 1u << 22);
    ASSERT_TRUE(t.has_value());
    EXPECT_GE(*t, prev);
    prev = *t;
  }
  EXPECT_FALSE(WalkLadder(f, {0, 1}, 0.1, 0, Stream::base()).reach_within(8, prev * 0.999).has_value());
}

TEST(ChainOracle, MatchesSimulation) {
  const std::vector<ParticleConfiguration> starts = {ParticleConfiguration::delta(0),
                                                     ParticleConfiguration::a_delta(0, 2)};
  for (const auto& w : starts)
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      RandomField f(seed);
      for (long u = 1; u <= 4; ++u) {
        const ChainResult c = chain_oracle(w, u, 0.0, f);
        const auto sim = simulated_T(w, u, 0.0, f);
        ASSERT_TRUE(sim.has_value());
        ASSERT_TRUE(c.time.has_value());
        EXPECT_NEAR(*c.time, *sim, 1e-9) << "seed " << seed << " u " << u;
      }
    }
}

TEST(ChainOracle, RejectsOutOfRangeTargets) {
  RandomField f(1);
  EXPECT_THROW(chain_oracle(ParticleConfiguration::delta(0), 0, 0.0, f), std::invalid_argument);
  EXPECT_THROW(chain_oracle(ParticleConfiguration::delta(0), kOracleSpan + 1, 0.0, f), std::invalid_argument);
}

TEST(Subadditivity, HoldsOnSharedRandomness) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    RandomField f(seed);
    const auto s = subadditivity_check(ParticleConfiguration::delta(0), 3, 7, 0.0, f);
    EXPECT_TRUE(s.holds) << seed;
    EXPECT_LE(s.lhs, s.rhs + kTimeSlack);
    const auto inc = event_inclusion_check(3, 3, 0.1, f);
    EXPECT_TRUE(inc.holds);
  }
}

TEST(TruncatedT, ConvergesToTheFullValue) {
  RandomField f(31);
  const auto w = ParticleConfiguration::I(0, 1);
  const auto full = simulated_T(w, 3, 0.0, f, 1e-9);
  ASSERT_TRUE(full.has_value());
  const ChainResult deep = truncated_T(w, 3, 0.0, f, 4000);
  ASSERT_TRUE(deep.time.has_value());
  EXPECT_NEAR(*deep.time, *full, 1e-9);
  const ChainResult shallow = truncated_T(w, 3, 0.0, f, 2);
  if (shallow.time) {
    EXPECT_GE(*shallow.time, *full - 1e-9);
  }
}
