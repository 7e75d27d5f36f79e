#include "frontprop/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frontprop {

namespace {

constexpr double kRescale = 1e200;
constexpr double kTinyTail = 1e-300;

double log_sum_exp(const std::vector<double>& logs) {
  double hi = -INFINITY;
  for (double v : logs) hi = std::max(hi, v);
  if (hi == -INFINITY) return -INFINITY;
  double s = 0.0;
  for (double v : logs) s += std::exp(v - hi);
  return hi + std::log(s);
}

}  // namespace

SkellamLaw::SkellamLaw(double t) : t_(t) {
  if (!(t >= 0) || !std::isfinite(t)) throw std::invalid_argument("SkellamLaw: t must be finite and >= 0");
  if (t == 0.0) {
    kmax_ = 0;
    pmf_ = {1.0};
    upper_ = {1.0, 0.0};
    lower_ = {1.0};
    return;
  }
  // Beyond 200 + 56 sqrt(t) both the Poisson regime (small t) and the Gaussian regime
  // (large t) put less than 1e-320 mass per site.
  kmax_ = static_cast<long>(std::ceil(200.0 + 56.0 * std::sqrt(t)));
  const long start = kmax_ + 200 + kmax_ / 10;
  const double x = 2.0 * t;

  std::vector<double> f(static_cast<std::size_t>(start) + 2, 0.0);
  f[static_cast<std::size_t>(start) + 1] = 0.0;
  f[static_cast<std::size_t>(start)] = 1e-280;
  for (long k = start; k >= 1; --k) {
    const std::size_t i = static_cast<std::size_t>(k);
    f[i - 1] = (2.0 * static_cast<double>(k) / x) * f[i] + f[i + 1];
    if (f[i - 1] > kRescale) {
      for (std::size_t j = i - 1; j < f.size(); ++j) f[j] /= kRescale;
    }
  }
  // Sum small terms first.
  double norm = 0.0;
  for (long k = start; k >= 1; --k) norm += 2.0 * f[static_cast<std::size_t>(k)];
  norm += f[0];

  pmf_.resize(static_cast<std::size_t>(kmax_) + 1);
  for (long k = 0; k <= kmax_; ++k) pmf_[static_cast<std::size_t>(k)] = f[static_cast<std::size_t>(k)] / norm;

  upper_.assign(static_cast<std::size_t>(kmax_) + 2, 0.0);
  double beyond = 0.0;
  for (long k = start; k > kmax_; --k) beyond += f[static_cast<std::size_t>(k)] / norm;
  upper_[static_cast<std::size_t>(kmax_) + 1] = beyond;
  for (long k = kmax_; k >= 0; --k) {
    const std::size_t i = static_cast<std::size_t>(k);
    upper_[i] = upper_[i + 1] + pmf_[i];
  }

  lower_.assign(static_cast<std::size_t>(kmax_) + 1, 0.0);
  lower_[0] = pmf_[0];
  double prefix = pmf_[0];  // pmf_0 + 2 sum_{1 <= j <= k-1} pmf_j
  for (long k = 1; k <= kmax_; ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    lower_[i] = prefix + pmf_[i];
    prefix += 2.0 * pmf_[i];
  }
}

double SkellamLaw::pmf(long k) const {
  k = std::labs(k);
  return k <= kmax_ ? pmf_[static_cast<std::size_t>(k)] : 0.0;
}

double SkellamLaw::G(long x) const {
  if (x >= 1) return x <= kmax_ + 1 ? upper_[static_cast<std::size_t>(x)] : 0.0;
  // P(zeta >= x) = 1 - P(zeta <= x - 1) = 1 - P(zeta >= 1 - x) by symmetry.
  const long y = 1 - x;
  return 1.0 - (y <= kmax_ + 1 ? upper_[static_cast<std::size_t>(y)] : 0.0);
}

double SkellamLaw::log_G(long x) const {
  if (x >= 1) return std::log(G(x));
  const long y = 1 - x;
  return std::log1p(-(y <= kmax_ + 1 ? upper_[static_cast<std::size_t>(y)] : 0.0));
}

double SkellamLaw::hit_probability(long x) const {
  if (x <= 0) return 1.0;
  return pmf(x) + 2.0 * G(x + 1);
}

double SkellamLaw::Gbar(long x) const {
  if (x <= 0) return 0.0;
  const double h = hit_probability(x);
  if (h < 0.5 || x > kmax_) return 1.0 - h;
  return lower_[static_cast<std::size_t>(x)];
}

double SkellamLaw::log_Gbar(long x) const {
  if (x <= 0) return -INFINITY;
  const double h = hit_probability(x);
  if (h < 0.5 || x > kmax_) return std::log1p(-h);
  return std::log(lower_[static_cast<std::size_t>(x)]);
}

bool SkellamLaw::precision_lost(long x) const { return x >= 1 && G(x) < kTinyTail; }

const SkellamLaw& skellam_law(double t) {
  thread_local std::vector<std::shared_ptr<SkellamLaw>> cache;
  for (const auto& law : cache)
    if (law->t() == t) return *law;
  if (cache.size() >= 8) cache.erase(cache.begin());
  cache.push_back(std::make_shared<SkellamLaw>(t));
  return *cache.back();
}

double skellam_pmf(double t, long k) { return skellam_law(t).pmf(k); }
double G(double t, long x) { return skellam_law(t).G(x); }
double Gbar(double t, long x) {
  if (x < 1) throw std::invalid_argument("Gbar: x must be >= 1");
  return skellam_law(t).Gbar(x);
}

CheckedProbability G_checked(double t, long x) {
  const SkellamLaw& law = skellam_law(t);
  return {law.G(x), law.precision_lost(x)};
}

// ---------------------------------------------------------------------------

double g_gamma(double gamma, double theta) { return gamma * theta - 2.0 * (std::cosh(theta) - 1.0); }

double biased_log_mgf_rate(double eps, double theta) {
  return 2.0 * (std::cosh(theta) - 1.0) + 4.0 * eps * std::sinh(theta);
}

double lambda(double eps, double theta, double a) {
  return biased_log_mgf_rate(eps, theta) + a * (1.0 + 2.0 * eps) * std::exp(theta);
}

double c_gamma(double gamma, double eps, double theta, double a) { return gamma * theta - lambda(eps, theta, a); }

double mu(double eps, double theta, double alpha1) { return theta * alpha1 - biased_log_mgf_rate(eps, theta); }

// ---------------------------------------------------------------------------

SlowdownProduct slowdown_product(const EtaProfile& profile, double t, double tol) {
  if (!(t >= 0)) throw std::invalid_argument("slowdown_product: t must be >= 0");
  if (!(tol > 0)) throw std::invalid_argument("slowdown_product: tol must be positive");
  if (!profile.satisfies_growth_condition())
    throw DivergentSum("slowdown_product: profile breaks the growth condition, no finite truncation certifies tol");
  if (t == 0.0) return {0.0, 0.0, 0};
  const SkellamLaw& law = skellam_law(t);
  const long kmax = law.support_bound();
  const long last = profile.finite_support() ? std::min(kmax, profile.x_max()) : kmax;

  // 1 - gbar_t(y) <= 2 G_t(y) <= 1/2 gives -log gbar_t(y) <= 4 G_t(y).
  std::vector<double> remainder(static_cast<std::size_t>(last) + 2, 0.0);
  double beyond = 0.0;
  if (!profile.finite_support() || profile.x_max() > kmax) {
    // Sites deeper than the stored support: G_t decays at least geometrically there
    // (log-concave pmf), with ratio no worse than at the boundary.
    const double g_edge = law.G(kmax + 1);
    const double ratio = std::min(0.5, law.pmf(kmax) > 0 ? law.pmf(kmax) / std::max(law.pmf(kmax - 1), 1e-320) : 0.5);
    double w = g_edge;
    for (long m = 1; m <= 4000 && w > 0; ++m, w *= ratio)
      beyond += 4.0 * static_cast<double>(profile.eta_at_depth(kmax + m)) * w;
  }
  remainder[static_cast<std::size_t>(last) + 1] = beyond;
  for (long k = last; k >= 0; --k) {
    const std::size_t i = static_cast<std::size_t>(k);
    remainder[i] = remainder[i + 1] + 4.0 * static_cast<double>(profile.eta_at_depth(k)) * law.G(k + 1);
  }
  long used = last + 1;
  while (used > 1 && remainder[static_cast<std::size_t>(used) - 1] <= tol) --used;
  double log_p = 0.0;
  for (long k = used - 1; k >= 0; --k) {
    const long n = profile.eta_at_depth(k);
    if (n > 0) log_p += static_cast<double>(n) * law.log_Gbar(k + 1);
  }
  return {log_p, remainder[static_cast<std::size_t>(used)], used};
}

BoundExponent slowdown_bound_exponent(const EtaProfile& profile, double b, double t) {
  if (!(t > 0)) throw std::invalid_argument("slowdown_bound_exponent: t must be positive");
  if (!(b >= 0)) throw std::invalid_argument("slowdown_bound_exponent: b must be >= 0");
  const SkellamLaw& law = skellam_law(t);
  const double bt = std::ceil(b * t);
  if (bt > static_cast<double>(law.support_bound())) return {0.0, -INFINITY};
  const long shift = static_cast<long>(bt);
  std::vector<double> logs;
  for (long k = shift; k <= law.support_bound(); ++k) {
    const double p = law.pmf(k);
    if (p <= 0) continue;
    logs.push_back(std::log(p) + profile.log_cumulative(k - shift));
  }
  const double log_e = log_sum_exp(logs);
  const double log_value = log_e - std::log(t);
  return {log_value > 709.0 ? INFINITY : std::exp(log_value), log_e};
}

double explosion_rate(double b, double theta, double t) {
  if (!(t > 0)) throw std::invalid_argument("explosion_rate: t must be positive");
  const SkellamLaw& law = skellam_law(t);
  const long shift = static_cast<long>(std::ceil(b * t));
  std::vector<double> logs;
  for (long k = std::max(shift, -law.support_bound()); k <= law.support_bound(); ++k) {
    const double p = law.pmf(k);
    if (p > 0) logs.push_back(std::log(p) + theta * static_cast<double>(k - shift));
  }
  return log_sum_exp(logs) / t;
}

// ---------------------------------------------------------------------------

double sqrt_tail_constant(double nu) {
  if (!(nu > 0)) throw std::invalid_argument("nu must be positive");
  // sup_{s > 0} s exp(-nu s / 2) = 2 / (e nu), reached at s = 2/nu.
  return 2.0 / (std::exp(1.0) * nu);
}

SqrtTail sqrt_tail_integral(double nu, double x) {
  if (!(nu > 0)) throw std::invalid_argument("nu must be positive");
  if (!(x >= 0)) throw std::invalid_argument("x must be >= 0");
  const double s = std::sqrt(x);
  const double exact = 2.0 / (nu * nu) * std::exp(-nu * s) * (nu * s + 1.0);
  const double bound = sqrt_tail_constant(nu) * (4.0 / nu) * std::exp(-0.5 * nu * s);
  return {exact, bound};
}

// ---------------------------------------------------------------------------

double front_excursion_bound(const ParticleConfiguration& w, double b, double phi, double t) {
  if (!(phi > 0)) throw std::invalid_argument("phi must be positive");
  if (!(t >= 0)) throw std::invalid_argument("t must be >= 0");
  const long level = static_cast<long>(std::floor(b * t));
  return w.f_theta(phi) * std::exp(t * (std::cosh(2.0 * phi) - 1.0)) * std::sqrt(skellam_law(t).G(level));
}

double exponential_moment_bound(const ParticleConfiguration& w, double phi, double t, double mean_front) {
  if (!(phi > 0)) throw std::invalid_argument("phi must be positive");
  return std::exp(2.0 * (std::cosh(phi) - 1.0) * t) * w.f_theta(phi) + w.a * mean_front;
}

}  // namespace frontprop
