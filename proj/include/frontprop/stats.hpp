#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace frontprop {

/// Sample mean with a normal-approximation interval.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;

  double half_width() const { return 0.5 * (hi - lo); }
};

Estimate mean_estimate(const std::vector<double>& xs, double z = 1.96);
/// Interval from a value and its standard error.
Estimate make_estimate(double value, double std_error, std::size_t n, double z = 1.96);

double normal_quantile(double p);
double normal_cdf(double x);

/// Binomial proportion with a Wilson score interval.
struct Proportion {
  double p = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t successes = 0;
  std::size_t n = 0;
};
Proportion wilson(std::size_t successes, std::size_t n, double z = 1.96);

/// log of an empirical frequency. A zero count is censored: `value` is then the
/// rule-of-three upper bound log(3/n) and must not be read as a point estimate.
struct LogProbability {
  double value = 0.0;
  double std_error = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool censored = false;
  std::size_t successes = 0;
  std::size_t n = 0;
};
LogProbability log_frequency(std::size_t successes, std::size_t n, double z = 1.96);

struct KsResult {
  double statistic;
  double p_value;
};
/// Asymptotic Kolmogorov survival function P(K > x).
double kolmogorov_survival(double x);
KsResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> xs, std::vector<double> ys);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_se = 0.0;
  double rss = 0.0;
  std::size_t n = 0;
};
/// Ordinary least squares y = intercept + slope x.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);
/// Gaussian-likelihood AIC of a least-squares fit with k parameters.
double least_squares_aic(double rss, std::size_t n, int k);

double correlation(const std::vector<double>& x, const std::vector<double>& y);
double lag1_autocorrelation(const std::vector<double>& xs);

struct ChiSquareResult {
  double statistic;
  double p_value;
  int dof;
};
/// Pearson test of independence for a 2x2 table of counts.
ChiSquareResult chi_square_2x2(double n11, double n12, double n21, double n22);

/// Ratio of means sum(y)/sum(x) with a delta-method interval.
Estimate ratio_estimate(const std::vector<double>& numerators, const std::vector<double>& denominators,
                        double z = 1.96);

}  // namespace frontprop
