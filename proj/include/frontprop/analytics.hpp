#pragma once

#include <memory>
#include <vector>

#include "frontprop/configuration.hpp"

namespace frontprop {

/// Law of zeta_t, the rate-2 continuous-time simple symmetric walk at time t: the
/// difference of two independent Poisson(t) counts, P(zeta_t = k) = e^{-2t} I_k(2t).
///
/// The scaled Bessel values are obtained by Miller's backward recurrence, normalized
/// by sum_k P(zeta_t = k) = 1. Backward recurrence is stable for I_k at every order, so
/// one scheme covers t from 0 to 1e4 without a series/asymptotic switch.
class SkellamLaw {
 public:
  explicit SkellamLaw(double t);

  double t() const { return t_; }
  /// Largest |k| with a stored value; mass beyond it is below double range.
  long support_bound() const { return kmax_; }

  double pmf(long k) const;
  /// G_t(x) = P(zeta_t >= x).
  double G(long x) const;
  double log_G(long x) const;
  /// gbar_t(x) = P(max_{s <= t} zeta_s < x) for x >= 1, by the reflection identity
  /// 1 - gbar = 2G - pmf, evaluated without cancellation.
  double Gbar(long x) const;
  double log_Gbar(long x) const;
  /// 1 - gbar_t(x) = pmf(x) + 2 G_t(x+1), accurate when tiny.
  double hit_probability(long x) const;
  /// True when the tail mass requested at x falls below 1e-300.
  bool precision_lost(long x) const;

 private:
  double t_;
  long kmax_;
  std::vector<double> pmf_;    // k = 0..kmax
  std::vector<double> upper_;  // upper_[k] = sum_{j >= k} pmf_j, k = 0..kmax+1
  std::vector<double> lower_;  // lower_[k] = pmf_0 + 2 sum_{1 <= j <= k-1} pmf_j + pmf_k
};

/// Cached law for repeated queries at the same t (thread local).
const SkellamLaw& skellam_law(double t);

double skellam_pmf(double t, long k);
double G(double t, long x);
double Gbar(double t, long x);

struct CheckedProbability {
  double value;
  bool precision_loss;
};
CheckedProbability G_checked(double t, long x);

// Bound functions ------------------------------------------------------------

/// gamma theta - 2 (cosh theta - 1): the speedup exponent of a lone walk.
double g_gamma(double gamma, double theta);
/// 2(cosh theta - 1) + 4 eps sinh theta + a (1 + 2 eps) e^theta.
double lambda(double eps, double theta, double a);
double c_gamma(double gamma, double eps, double theta, double a);
/// theta alpha1 - 2(cosh theta - 1) - 4 eps sinh theta.
double mu(double eps, double theta, double alpha1);

/// log E[exp(theta xi^eps_t)] / t for the biased rate-2 walk: 2(cosh theta-1) + 4 eps sinh theta.
double biased_log_mgf_rate(double eps, double theta);

// Slowdown ------------------------------------------------------------------

struct SlowdownProduct {
  double log_probability;   // log P(r_t = 0)
  double truncation_error;  // certified bound on the neglected part of the log
  long sites_used;
};

/// P(r_t = 0) = prod_{x <= 0} gbar_t(1 - x)^{eta(x)} in log domain. Sites are added
/// until the remainder bound sum eta(x) * (-log gbar_t(1-x)) <= 4 sum eta(x) G_t(1-x)
/// drops below tol. Throws DivergentSum for profiles breaking the growth condition.
SlowdownProduct slowdown_product(const EtaProfile& profile, double t, double tol = 1e-14);

struct BoundExponent {
  double value;                // t^{-1} E[1(zeta_t >= ceil(bt)) H(-zeta_t + ceil(bt))], may be +inf
  double log_expectation;      // log of the expectation, finite even when value overflows
};

/// Exponent of the slowdown upper bound P(r_t <= bt) <= exp(-t * value).
BoundExponent slowdown_bound_exponent(const EtaProfile& profile, double b, double t);

/// t^{-1} log E[1(zeta_t >= ceil(bt)) exp(theta (zeta_t - ceil(bt)))], the growth rate
/// whose positivity drives exponential slowdown decay.
double explosion_rate(double b, double theta, double t);

// Square-root tails -----------------------------------------------------------

struct SqrtTail {
  double exact;  // int_x^inf exp(-nu sqrt(u)) du
  double bound;  // d1 (4/nu) exp(-(nu/2) sqrt(x))
};
SqrtTail sqrt_tail_integral(double nu, double x);

/// d1 = sup_{s > 0} s exp(-nu s / 2) = 2/(e nu), so exp(-nu sqrt(u)) <= d1 u^{-1/2} exp(-(nu/2) sqrt(u))
/// for every u > 0.
double sqrt_tail_constant(double nu);

// Bounds on a configuration ----------------------------------------------------

/// f_phi(w) exp(t(cosh 2phi - 1)) G_t(floor(bt))^{1/2}: bound on P(sup_{s<=t} max F_s >= bt).
double front_excursion_bound(const ParticleConfiguration& w, double b, double phi, double t);
/// exp(2(cosh phi - 1) t) f_phi(w) + a E[r_t]: bound on E[f_phi(X_t)].
double exponential_moment_bound(const ParticleConfiguration& w, double phi, double t, double mean_front);

}  // namespace frontprop
