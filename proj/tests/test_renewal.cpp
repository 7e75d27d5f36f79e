#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "frontprop/renewal.hpp"

using namespace frontprop;

namespace {

RenewalCandidate diagnostic_a2() {
  RenewalCandidate c;
  c.a = 2;
  c.theta = 0.5;
  c.alpha1 = 1.2;
  c.alpha2 = 1.5;
  c.eps0 = 0.1;
  c.p = 0.3;
  c.L = 8;
  c.M = 4;
  c.alpha_hat0 = 1.69;
  return c;
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST(RenewalParams, StrictDerivedConstants) {
  RenewalCandidate c;
  c.a = 1;
  c.mode = RenewalMode::strict;
  c.L = 16;
  const ParamCheck check = validate_params(c);
  EXPECT_EQ(check.params.M, 40);
  EXPECT_EQ(check.params.M_prime, 9);
  EXPECT_EQ(check.params.required_L, 2825761);
  EXPECT_TRUE(mentions(check.violations, "2825761"));
  EXPECT_EQ(strict_M(3), 48);
}

TEST(RenewalParams, DiagnosticSetIsValid) {
  const ParamCheck check = validate_params(diagnostic_a2());
  EXPECT_TRUE(check.ok()) << (check.violations.empty() ? "" : check.violations.front());
  EXPECT_EQ(check.params.window(), 1);
}

TEST(RenewalParams, EachConditionIsReported) {
  auto c = diagnostic_a2();
  c.p = 0.9;
  EXPECT_TRUE(mentions(validate_params(c).violations, "p·e^θ"));
  c = diagnostic_a2();
  c.alpha2 = 1.0;
  EXPECT_TRUE(mentions(validate_params(c).violations, "α1 ≥ α2"));
  c = diagnostic_a2();
  c.alpha_hat0 = 0.0;
  EXPECT_TRUE(mentions(validate_params(c).violations, "not supplied"));
  c = diagnostic_a2();
  c.L = 1;
  EXPECT_TRUE(mentions(validate_params(c).violations, "e^{−Lθ}"));
  c = diagnostic_a2();
  c.eps0 = 0.35;
  EXPECT_TRUE(mentions(validate_params(c).violations, "4ε0"));
}

TEST(Renewal, TruncatedShift) {
  auto w = ParticleConfiguration::delta(5);
  w.particles[{3, 1}] = 4;
  w.particles[{-2, 1}] = 1;
  const auto s = truncated_shift(w, 2);
  EXPECT_EQ(s.front, 3);
  EXPECT_EQ(s.particles.size(), 2u);
  EXPECT_EQ(s.particles.at({1, 1}), 2);
  EXPECT_EQ(s.particles.at({3, 1}), 3);
}

TEST(Renewal, SpeedFromIncrements) {
  std::vector<RenewalIncrement> inc;
  for (int k = 0; k < 200; ++k) inc.push_back({2.0 + (k % 3), 3.0 * (2.0 + (k % 3))});
  const RenewalSpeed s = renewal_speed(inc, 5);
  EXPECT_NEAR(s.speed.value, 3.0, 1e-12);
  EXPECT_NEAR(s.speed.half_width(), 0.0, 1e-9);
  EXPECT_NEAR(s.censored_fraction(), 5.0 / 205.0, 1e-12);
  inc.resize(10);
  EXPECT_THROW(renewal_speed(inc, 0), std::invalid_argument);
}

TEST(Renewal, AuxiliaryFrontIsConsistent) {
  RandomField f(4);
  const AuxiliaryFront aux = auxiliary_front(f, 0, 2, 4, 0.1, 50.0);
  ASSERT_FALSE(aux.nu.empty());
  double sum = 0;
  for (std::size_t k = 0; k < aux.nu.size(); ++k) {
    EXPECT_GT(aux.nu[k], 0.0);
    sum += aux.nu[k];
    EXPECT_NEAR(aux.cumulative[k], sum, 1e-9);
  }
  EXPECT_EQ(aux.at(0.0), 0);
  EXPECT_EQ(aux.at(aux.cumulative.front()), 1);
}

TEST(Renewal, FindsARegeneration) {
  const RenewalParams params = validate_params(diagnostic_a2()).params;
  RandomField f(17);
  const auto chain =
      regeneration_chain(ParticleConfiguration::I(0, 2), 0.1, params, f, 2, 3000.0, 200.0);
  ASSERT_FALSE(chain.empty());
  const RenewalRecord& r = chain.front();
  EXPECT_FALSE(r.attempts.empty());
  if (!r.censored) {
    ASSERT_TRUE(r.kappa.has_value());
    EXPECT_GT(*r.kappa, 0.0);
    EXPECT_EQ(*r.K, static_cast<int>(r.attempts.size()));
    EXPECT_TRUE(r.attempts.back().censored);  // the regenerating attempt is the one whose D never fires
  }
  EXPECT_NE(r.csv().find("attempt"), std::string::npos);
}
