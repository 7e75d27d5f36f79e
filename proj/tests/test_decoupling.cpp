#include <gtest/gtest.h>

#include <cmath>

#include "frontprop/decoupling.hpp"
#include "frontprop/hitting.hpp"

using namespace frontprop;

TEST(Decoupling, BlockTimeMatchesSimulation) {
  DecoupleSpec spec;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    RandomField f(seed);
    const ChainResult b = block_T(spec, f);
    const auto sim = simulated_T(ParticleConfiguration::I(0, 1), spec.target(), 0.0, f, spec.tol);
    ASSERT_TRUE(b.time.has_value());
    ASSERT_TRUE(sim.has_value());
    EXPECT_NEAR(*b.time, *sim, 1e-9) << seed;
  }
}

TEST(Decoupling, IdentitiesAndInclusion) {
  DecoupleSpec spec;
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    const DecoupleSample s = decouple_sample(spec, RandomField(seed));
    EXPECT_TRUE(s.identities_hold()) << seed;
    EXPECT_TRUE(s.inclusion_holds()) << seed;
    EXPECT_EQ(s.D, std::min(s.J, s.K) < spec.threshold());
    EXPECT_EQ(s.F, s.L >= spec.threshold());
  }
}

TEST(Decoupling, SpecValidation) {
  DecoupleSpec spec;
  EXPECT_DOUBLE_EQ(spec.threshold(), 0.5 * 64.0);
  EXPECT_EQ(spec.remote_top(), -8);
  spec.m = 0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(Decoupling, FamilyUsesSpacedBlocks) {
  DecoupleSpec spec;
  const auto fam = decoupled_family(spec, 3, RandomField(3));
  ASSERT_EQ(fam.size(), 3u);
  for (double t : fam) EXPECT_GT(t, 0.0);
}

TEST(Decoupling, TailBoundOrdering) {
  for (double t : {4.0, 25.0, 100.0}) {
    const TailBound b = hitting_tail_bound(EtaProfile::constant(1), 3, t);
    EXPECT_GT(b.product, 0.0);
    EXPECT_LE(b.product, b.coarse * (1 + 1e-12)) << t;
    EXPECT_LE(b.coarse, 1.0);
  }
}

TEST(Decoupling, EventBoundsAreProbabilities) {
  DecoupleSpec spec;
  EXPECT_GT(D_union_bound(spec), 0.0);
  EXPECT_GT(F_product_bound(spec), 0.0);
  EXPECT_LE(F_product_bound(spec), 1.0);
}
