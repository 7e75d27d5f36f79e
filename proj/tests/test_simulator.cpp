#include <gtest/gtest.h>

#include <cmath>

#include "frontprop/simulator.hpp"

using namespace frontprop;

TEST(Simulator, SameSeedSameTrace) {
  RandomField f(11);
  const auto w = ParticleConfiguration::a_delta(0, 2);
  const auto x = run(w, 30.0, f);
  const auto y = run(w, 30.0, f);
  EXPECT_EQ(x.front_path, y.front_path);
  EXPECT_EQ(x.front_csv(), y.front_csv());
  EXPECT_NE(run(w, 30.0, RandomField(12)).front_path, x.front_path);
}

TEST(Simulator, FrontIsNondecreasingAndMovesByOne) {
  RandomField f(5);
  const auto tr = run(ParticleConfiguration::delta(0), 50.0, f);
  ASSERT_FALSE(tr.front_path.empty());
  EXPECT_EQ(tr.front_path.front(), (std::pair<double, long>{0.0, 0}));
  for (std::size_t k = 1; k < tr.front_path.size(); ++k) {
    EXPECT_GT(tr.front_path[k].first, tr.front_path[k - 1].first);
    EXPECT_EQ(tr.front_path[k].second, tr.front_path[k - 1].second + 1);
  }
  EXPECT_EQ(tr.front_at(50.0), tr.front_path.back().second);
}

TEST(Simulator, ActivationsMatchFrontPath) {
  RandomField f(6);
  const auto tr = run(ParticleConfiguration::delta(0), 40.0, f);
  for (std::size_t k = 1; k < tr.front_path.size(); ++k) {
    const auto it = tr.activations.find(tr.front_path[k].second);
    ASSERT_NE(it, tr.activations.end());
    EXPECT_EQ(it->second, tr.front_path[k].first);
  }
}

TEST(Simulator, WalkPathsFollowTheField) {
  RandomField f(7);
  SimulationOptions o;
  o.record_walk_paths = true;
  const auto tr = run(ParticleConfiguration::delta(0), 20.0, f, o);
  // The original walk is born at time 0, so its absolute path is its own-frame path.
  const Trajectory own = walk_path(f, {0, 1}, 0.0, {std::nullopt, 20.0});
  const Trajectory& abs = tr.walk_paths.at({0, 1});
  ASSERT_EQ(abs.times.size(), own.times.size());
  for (std::size_t k = 0; k < own.times.size(); ++k) {
    EXPECT_NEAR(abs.times[k], own.times[k], 1e-12);
    EXPECT_EQ(abs.positions[k], own.positions[k]);
  }
  // Configuration at t has every position at or below the front.
  const auto w = tr.config_at(20.0);
  for (const auto& [b, pos] : w.particles) EXPECT_LE(pos, w.front);
}

TEST(Simulator, InfiniteStartNeedsTolerance) {
  RandomField f(8);
  EXPECT_THROW(run(ParticleConfiguration::I(0, 1), 10.0, f), std::invalid_argument);
  SimulationOptions o;
  o.tol = 1e-9;
  const auto tr = run(ParticleConfiguration::I(0, 1), 10.0, f, o);
  EXPECT_GT(tr.truncation.depth, 0);
  EXPECT_LE(tr.truncation.bound, 1e-9);
}

TEST(Simulator, CoupledFrontsAreOrdered) {
  RandomField f(9);
  const auto traces = coupled_run(ParticleConfiguration::delta(0), {0.0, 0.1, 0.3}, 40.0, f);
  ASSERT_EQ(traces.size(), 3u);
  for (double t = 0; t <= 40.0; t += 0.5) {
    EXPECT_LE(traces[0].front_at(t), traces[1].front_at(t));
    EXPECT_LE(traces[1].front_at(t), traces[2].front_at(t));
  }
}

TEST(Simulator, CheckpointAndRewind) {
  RandomField f(10);
  Simulation s(ParticleConfiguration::delta(0), f);
  s.advance_to(5.0);
  Simulation copy = s;
  s.advance_to(15.0);
  copy.advance_to(15.0);
  EXPECT_EQ(s.front(), copy.front());
  EXPECT_EQ(s.events(), copy.events());
}

TEST(Simulator, EventCapStops) {
  RandomField f(3);
  SimulationOptions o;
  o.event_cap = 10;
  const auto tr = run(ParticleConfiguration::delta(0), 1000.0, f, o);
  EXPECT_TRUE(tr.cap_reached);
}
