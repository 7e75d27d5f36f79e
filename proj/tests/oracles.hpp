#pragma once

// Independent reference computations used by the unit tests and the acceptance run.
// None of them call into the library's analytic code.

#include <cmath>
#include <vector>

namespace oracle {

inline double log_poisson(double mean, long k) {
  return -mean + static_cast<double>(k) * std::log(mean) - std::lgamma(static_cast<double>(k) + 1.0);
}

/// P(N1 - N2 = k) for independent Poisson(t) counts, by direct convolution.
inline double skellam_pmf(double t, long k) {
  if (k < 0) k = -k;
  double s = 0.0;
  const long top = static_cast<long>(t + 60.0 * std::sqrt(t + 1.0) + 60.0);
  for (long j = 0; j <= top; ++j) s += std::exp(log_poisson(t, j + k) + log_poisson(t, j));
  return s;
}

/// P(max_{s <= t} zeta_s >= x) for the rate-2 symmetric walk, x >= 1, by uniformization:
/// the jump count is Poisson(2t) and the embedded chain is a simple walk absorbed at x.
inline double hit_by(double t, long x) {
  const double rate = 2.0 * t;
  const long kmax = static_cast<long>(rate + 40.0 * std::sqrt(rate + 1.0) + 60.0);
  // alive[p + off]: probability of sitting at p without having touched x.
  const long off = kmax + 1;
  std::vector<double> alive(static_cast<std::size_t>(off + x + 1), 0.0), next(alive.size());
  alive[static_cast<std::size_t>(off)] = 1.0;
  double survive_weighted = 0.0;
  for (long k = 0; k <= kmax; ++k) {
    double s = 0.0;
    for (double v : alive) s += v;
    survive_weighted += std::exp(log_poisson(rate, k)) * s;
    std::fill(next.begin(), next.end(), 0.0);
    for (long p = -k; p < x; ++p) {
      const double v = alive[static_cast<std::size_t>(p + off)];
      if (v == 0.0) continue;
      if (p + 1 < x) next[static_cast<std::size_t>(p + 1 + off)] += 0.5 * v;
      if (p - 1 + off >= 0) next[static_cast<std::size_t>(p - 1 + off)] += 0.5 * v;
    }
    alive.swap(next);
  }
  return 1.0 - survive_weighted;
}

}  // namespace oracle
