#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "frontprop/experiments.hpp"
#include "frontprop/run_config.hpp"

using namespace frontprop;

TEST(Report, Fnv1a) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Report, CsvSwitchesWholeColumnToLog10) {
  DataTable t{"x", {"n", "p", "q"}, {{1, 0.5, 0.5}, {2, 1e-9, 0.25}}, {1, 2}};
  const std::string csv = t.csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,log10_p,q");
  EXPECT_NE(csv.find("-9"), std::string::npos);
}

TEST(Report, JsonIsDeterministicAndHandlesInfinity) {
  ExperimentReport r;
  r.id = "demo";
  r.seed = 3;
  r.add_value("big", INFINITY, 4);
  r.verdict("C0", true, "ok");
  r.runtime_seconds = 1.5;
  const auto j = nlohmann::json::parse(r.json());
  EXPECT_EQ(j["experiment"], "demo");
  EXPECT_EQ(j["estimates"][0]["value"], "inf");
  EXPECT_EQ(r.json().find("runtime"), std::string::npos);
  EXPECT_NE(r.sidecar().find("runtime"), std::string::npos);
  EXPECT_TRUE(r.passed());
  r.verdict("C1", false);
  EXPECT_FALSE(r.passed());
}

TEST(Parallel, ResultsInIndexOrder) {
  const auto v = replicate<std::size_t>(1000, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], i * i);
}

TEST(RateCurve, ReadsOffFrequencies) {
  // T(n) = k for k = 1..100 and n = 10: P(T <= n/b) at b = 1 is 10/100.
  std::vector<double> T;
  for (int k = 1; k <= 100; ++k) T.push_back(k);
  const auto pts = rate_curve(T, 10, {1.0, 0.05});
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_NEAR(pts[0].I, -(1.0 / 10) * std::log(0.1), 1e-12);
  EXPECT_LE(pts[0].I_lo, pts[0].I);
  EXPECT_GE(pts[0].I_hi, pts[0].I);
  EXPECT_NEAR(pts[1].I, 0.0, 1e-12);  // every sample succeeds
  EXPECT_NEAR(u_hat(T, 10, 2.0).value, std::log(0.2), 1e-12);
}

TEST(SurvivalFits, ExponentialSamplesPreferTheExponentialFit) {
  std::vector<double> xs;
  for (int i = 1; i < 4000; ++i) xs.push_back(-std::log(i / 4000.0));
  const SurvivalFits f = survival_fits(xs);
  EXPECT_NEAR(f.exponential.slope, -1.0, 0.05);
  EXPECT_GT(f.exponential.r2, 0.99);
  EXPECT_LT(f.aic_exponential, f.aic_power);
}

TEST(SqrtTail, LawAndExperiment) {
  const SqrtTailLaw law{1.0, 1.0};
  EXPECT_NEAR(law.mean(), 2.0, 1e-12);
  EXPECT_NEAR(law.tail(4.0), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(law.tail(law.sample(0.3)), 0.3, 1e-12);
  const auto e = sqrt_tail_ld_experiment(law, 4.0, {1, 2, 4, 8}, 20000, 5);
  EXPECT_TRUE(e.precondition_ok);
  EXPECT_NEAR(e.single_draw_exact, std::exp(-2.0), 1e-15);
  EXPECT_NEAR(std::exp(e.points[0].logp.value), std::exp(-2.0), 0.01);
  const auto bad = sqrt_tail_ld_experiment(law, 1.5, {1, 2}, 100, 5);
  EXPECT_FALSE(bad.precondition_ok);
}

TEST(Window, DerivedParameters) {
  WindowEventParams p{0.0, 1.2, 1.32};
  p.derive();
  EXPECT_NEAR(p.alpha, 1 - 0.6 / 1.32, 1e-12);
  EXPECT_GT(p.delta, 0.0);
  EXPECT_NO_THROW(p.validate());
  WindowEventParams q{1.0, 0.5, 1.32};
  EXPECT_THROW(q.validate(), std::invalid_argument);
}

TEST(Speed, FreeWalkDrift) {
  const Estimate d = free_walk_drift(0.25, 100.0, 2000, 3);
  EXPECT_LT(std::fabs(d.value - 1.0), 3 * d.std_error + 1e-9);
}

TEST(Truncation, DeepAndShallowAgree) {
  const TruncationCheck c = truncation_check(1, 20.0, 1e-9, 20, 9);
  EXPECT_EQ(c.samples, 20u);
  EXPECT_EQ(c.identical, 20u);
  EXPECT_GT(c.K, 0);
}

TEST(RunConfig, ParsesAndRejects) {
  const RunConfig c = parse_run_config("# demo\nprofile=polynomial:2\neps=0,0.1\nseed=7\n");
  EXPECT_EQ(c.eps, (std::vector<double>{0.0, 0.1}));
  EXPECT_EQ(*c.seed, 7u);
  EXPECT_EQ(c.eta_profile().law(), TailLaw::polynomial);
  try {
    parse_run_config("alpha3=1\nseed=x\na=2\na=3\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.messages().size(), 3u);
  }
  EXPECT_EQ(parse_run_config("seed=1\nout=a\n").hash(), parse_run_config("out=b\nseed=1\n").hash());
  EXPECT_NE(parse_run_config("seed=1\n").hash(), parse_run_config("seed=2\n").hash());
}
