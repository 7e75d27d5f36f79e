#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "frontprop/stats.hpp"

using namespace frontprop;

TEST(Stats, NormalQuantileRoundTrip) {
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-9);
  for (double p : {0.01, 0.3, 0.5, 0.9}) EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-12);
}

TEST(Stats, WilsonInterval) {
  const Proportion p = wilson(10, 100);
  EXPECT_DOUBLE_EQ(p.p, 0.1);
  EXPECT_NEAR(p.lo, 0.0552, 1e-4);
  EXPECT_NEAR(p.hi, 0.1744, 1e-4);
  const Proportion z = wilson(0, 50);
  EXPECT_EQ(z.lo, 0.0);
  EXPECT_GT(z.hi, 0.0);
}

TEST(Stats, CensoredLogFrequency) {
  const LogProbability l = log_frequency(0, 300);
  EXPECT_TRUE(l.censored);
  EXPECT_NEAR(l.value, std::log(3.0 / 300.0), 1e-15);
  const LogProbability m = log_frequency(30, 300);
  EXPECT_FALSE(m.censored);
  EXPECT_NEAR(m.value, std::log(0.1), 1e-15);
  EXPECT_LT(m.lo, m.value);
  EXPECT_GT(m.hi, m.value);
}

TEST(Stats, KolmogorovSurvival) {
  EXPECT_NEAR(kolmogorov_survival(1.36), 0.0494, 5e-4);
  EXPECT_NEAR(kolmogorov_survival(0.5), 0.9639, 5e-4);
  EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
}

TEST(Stats, KsDetectsShift) {
  std::mt19937_64 g(1);
  std::normal_distribution<double> n01;
  std::vector<double> a, b, c;
  for (int i = 0; i < 2000; ++i) {
    a.push_back(n01(g));
    b.push_back(n01(g));
    c.push_back(n01(g) + 0.3);
  }
  EXPECT_GT(ks_two_sample(a, b).p_value, 1e-3);
  EXPECT_LT(ks_two_sample(a, c).p_value, 1e-6);
  EXPECT_GT(ks_one_sample(a, normal_cdf).p_value, 1e-3);
}

TEST(Stats, LinearFitExact) {
  const LinearFit f = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_NEAR(f.rss, 0.0, 1e-20);
}

TEST(Stats, CorrelationAndLag) {
  EXPECT_NEAR(correlation({1, 2, 3}, {2, 4, 6}), 1.0, 1e-12);
  EXPECT_NEAR(lag1_autocorrelation({1, -1, 1, -1, 1, -1}), -1.0, 0.2);
}

TEST(Stats, ChiSquareIndependent) {
  const ChiSquareResult r = chi_square_2x2(50, 50, 50, 50);
  EXPECT_NEAR(r.statistic, 0.0, 1e-12);
  EXPECT_NEAR(r.p_value, 1.0, 1e-12);
}

// The 95% interval for a mean should cover the truth about 95% of the time.
TEST(Stats, IntervalCoverage) {
  std::mt19937_64 g(12345);
  std::exponential_distribution<double> e(1.0);
  int covered = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> xs(200);
    for (auto& x : xs) x = e(g);
    const Estimate est = mean_estimate(xs);
    covered += est.lo <= 1.0 && 1.0 <= est.hi;
  }
  EXPECT_GE(covered, 930);
  EXPECT_LE(covered, 970);
}

TEST(Stats, RatioEstimate) {
  const Estimate r = ratio_estimate({2, 4, 6}, {1, 2, 3});
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  EXPECT_NEAR(r.std_error, 0.0, 1e-12);
}
