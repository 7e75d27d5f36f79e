#include "frontprop/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace frontprop {

Estimate make_estimate(double value, double std_error, std::size_t n, double z) {
  return {value, std_error, value - z * std_error, value + z * std_error, n};
}

Estimate mean_estimate(const std::vector<double>& xs, double z) {
  if (xs.empty()) throw std::invalid_argument("mean_estimate: empty sample");
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double se = xs.size() > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
  return make_estimate(mean, se, xs.size(), z);
}

double normal_quantile(double p) { return boost::math::quantile(boost::math::normal(), p); }
double normal_cdf(double x) { return boost::math::cdf(boost::math::normal(), x); }

Proportion wilson(std::size_t successes, std::size_t n, double z) {
  if (n == 0) throw std::invalid_argument("wilson: n must be positive");
  if (successes > n) throw std::invalid_argument("wilson: successes exceed n");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  return {p, std::max(0.0, centre - half), std::min(1.0, centre + half), successes, n};
}

LogProbability log_frequency(std::size_t successes, std::size_t n, double z) {
  if (n == 0) throw std::invalid_argument("log_frequency: n must be positive");
  LogProbability out;
  out.successes = successes;
  out.n = n;
  const double nn = static_cast<double>(n);
  if (successes == 0) {
    out.censored = true;
    out.value = std::log(3.0 / nn);
    out.lo = -INFINITY;
    out.hi = out.value;
    return out;
  }
  const double p = static_cast<double>(successes) / nn;
  out.value = std::log(p);
  out.std_error = std::sqrt((1 - p) / static_cast<double>(successes));
  out.lo = out.value - z * out.std_error;
  out.hi = std::min(0.0, out.value + z * out.std_error);
  return out;
}

double kolmogorov_survival(double x) {
  if (x <= 0) return 1.0;
  if (x < 0.3) {
    // Small-x form converges faster: P(K <= x) = sqrt(2 pi)/x sum exp(-(2j-1)^2 pi^2 / (8 x^2)).
    double s = 0.0;
    for (int j = 1; j <= 20; ++j) {
      const double k = 2.0 * j - 1.0;
      s += std::exp(-k * k * M_PI * M_PI / (8 * x * x));
    }
    return 1.0 - std::sqrt(2 * M_PI) / x * s;
  }
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    s += (j % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (static_cast<double>(i) + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

KsResult ks_two_sample(std::vector<double> xs, std::vector<double> ys) {
  if (xs.empty() || ys.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double n = static_cast<double>(xs.size());
  const double m = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] == v) ++i;
    while (j < ys.size() && ys[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  const double ne = std::sqrt(n * m / (n + m));
  return {d, kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d)};
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("linear_fit: x values are all equal");
  LinearFit f;
  f.n = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    f.rss += r * r;
  }
  f.r2 = syy > 0 ? 1.0 - f.rss / syy : 1.0;
  f.slope_se = x.size() > 2 ? std::sqrt(f.rss / (n - 2) / sxx) : 0.0;
  return f;
}

double least_squares_aic(double rss, std::size_t n, int k) {
  const double nn = static_cast<double>(n);
  return nn * std::log(std::max(rss, 1e-300) / nn) + 2.0 * k;
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("correlation: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double lag1_autocorrelation(const std::vector<double>& xs) {
  if (xs.size() < 3) throw std::invalid_argument("lag1_autocorrelation: need >= 3 values");
  const double n = static_cast<double>(xs.size());
  const double m = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    den += (xs[i] - m) * (xs[i] - m);
    if (i + 1 < xs.size()) num += (xs[i] - m) * (xs[i + 1] - m);
  }
  return den > 0 ? num / den : 0.0;
}

ChiSquareResult chi_square_2x2(double n11, double n12, double n21, double n22) {
  const double n = n11 + n12 + n21 + n22;
  const double r1 = n11 + n12, r2 = n21 + n22, c1 = n11 + n21, c2 = n12 + n22;
  if (r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0) return {0.0, 1.0, 1};
  const double obs[4] = {n11, n12, n21, n22};
  const double exp[4] = {r1 * c1 / n, r1 * c2 / n, r2 * c1 / n, r2 * c2 / n};
  double stat = 0;
  for (int i = 0; i < 4; ++i) stat += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(1.0), stat));
  return {stat, p, 1};
}

Estimate ratio_estimate(const std::vector<double>& num, const std::vector<double>& den, double z) {
  if (num.size() != den.size() || num.size() < 2) throw std::invalid_argument("ratio_estimate: need >= 2 pairs");
  const double n = static_cast<double>(num.size());
  const double sy = std::accumulate(num.begin(), num.end(), 0.0);
  const double sx = std::accumulate(den.begin(), den.end(), 0.0);
  if (sx <= 0) throw std::invalid_argument("ratio_estimate: denominators must have a positive sum");
  const double r = sy / sx;
  const double mx = sx / n;
  double ss = 0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    const double e = num[i] - r * den[i];
    ss += e * e;
  }
  const double se = std::sqrt(ss / (n - 1) / n) / mx;
  return make_estimate(r, se, num.size(), z);
}

}  // namespace frontprop
