#include <gtest/gtest.h>

#include <cmath>

#include "frontprop/analytics.hpp"
#include "oracles.hpp"

using namespace frontprop;

TEST(Skellam, PmfMatchesPoissonConvolution) {
  for (double t : {0.1, 1.0, 7.5, 40.0}) {
    const SkellamLaw law(t);
    double total = 0;
    for (long k = -law.support_bound(); k <= law.support_bound(); ++k) total += law.pmf(k);
    EXPECT_NEAR(total, 1.0, 1e-13) << t;
    for (long k : {0L, 1L, 3L, 10L, 25L}) {
      const double ref = oracle::skellam_pmf(t, k);
      EXPECT_NEAR(law.pmf(k), ref, 1e-13 + 1e-10 * ref) << "t=" << t << " k=" << k;
      EXPECT_EQ(law.pmf(-k), law.pmf(k));
    }
  }
}

TEST(Skellam, ZeroTime) {
  const SkellamLaw law(0.0);
  EXPECT_EQ(law.pmf(0), 1.0);
  EXPECT_EQ(law.pmf(1), 0.0);
  EXPECT_EQ(law.Gbar(1), 1.0);
}

TEST(Skellam, HitProbabilityMatchesUniformization) {
  for (double t : {0.5, 1.0, 10.0, 60.0}) {
    const SkellamLaw law(t);
    for (long x : {1L, 2L, 5L, 12L}) {
      const double ref = oracle::hit_by(t, x);
      EXPECT_NEAR(law.hit_probability(x), ref, 1e-12) << "t=" << t << " x=" << x;
      EXPECT_NEAR(law.Gbar(x), 1 - ref, 1e-12);
    }
  }
}

TEST(Skellam, KnownGbarValue) {
  EXPECT_NEAR(Gbar(1.0, 1), 0.523777, 1e-6);
}

TEST(Skellam, TailsStayPositiveDeepOut) {
  const SkellamLaw law(1.0);
  EXPECT_GT(law.G(40), 0.0);
  EXPECT_LT(law.log_G(40), -100.0);
  EXPECT_GT(law.G(40), law.pmf(40));
  EXPECT_LT(law.G(40), law.pmf(40) * 1.03);
}

TEST(BoundFunctions, Identities) {
  EXPECT_NEAR(biased_log_mgf_rate(0.1, 0.3), 2 * (std::cosh(0.3) - 1) + 0.4 * std::sinh(0.3), 1e-15);
  EXPECT_NEAR(g_gamma(2.0, 0.5), 1.0 - 2 * (std::cosh(0.5) - 1), 1e-15);
  EXPECT_NEAR(mu(0.1, 0.5, 1.2), 0.6 - 2 * (std::cosh(0.5) - 1) - 0.4 * std::sinh(0.5), 1e-15);
  EXPECT_NEAR(lambda(0.0, 0.0, 2.0), 2.0, 1e-15);
}

TEST(SqrtTail, ClosedFormAndBound) {
  for (double nu : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    EXPECT_NEAR(sqrt_tail_constant(nu), 2.0 / (std::exp(1.0) * nu), 1e-15);
    for (double x : {0.0, 0.1, 1.0, 10.0, 100.0}) {
      const SqrtTail s = sqrt_tail_integral(nu, x);
      const double r = std::sqrt(x);
      const double exact = 2 * std::exp(-nu * r) * (r / nu + 1 / (nu * nu));
      EXPECT_NEAR(s.exact, exact, 1e-12 * exact);
      EXPECT_LE(s.exact, s.bound * (1 + 1e-12));
    }
  }
}

TEST(Slowdown, FiniteProductIsExact) {
  const EtaProfile p = EtaProfile::finite({1, 2, 1});
  const double t = 3.0;
  const double expect = std::log(1 - oracle::hit_by(t, 1)) +
                        2 * std::log(1 - oracle::hit_by(t, 2)) + std::log(1 - oracle::hit_by(t, 3));
  const SlowdownProduct s = slowdown_product(p, t);
  EXPECT_NEAR(s.log_probability, expect, 1e-12);
  EXPECT_EQ(s.sites_used, 3);
}

TEST(Slowdown, ConstantProfileDecaysLikeRootT) {
  const EtaProfile p = EtaProfile::constant(1);
  const double l1 = -slowdown_product(p, 100.0).log_probability;
  const double l2 = -slowdown_product(p, 400.0).log_probability;
  EXPECT_NEAR(std::log(l2 / l1) / std::log(4.0), 0.5, 0.05);
  EXPECT_THROW(slowdown_product(EtaProfile::exponential(0.5), 10.0), DivergentSum);
}

TEST(Slowdown, BoundExponentSigns) {
  EXPECT_GT(slowdown_bound_exponent(EtaProfile::constant(1), 0.05, 100.0).value, 0.0);
  EXPECT_GT(explosion_rate(0.05, 2.0, 100.0), 0.0);
}
