#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontprop/randomness.hpp"

namespace frontprop {

/// Raised when a functional of an infinite configuration does not converge.
class DivergentSum : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class TailLaw { zero, constant, polynomial, exponential };

const char* to_string(TailLaw law);
TailLaw tail_law_from_string(const std::string& name);

/// Particle counts eta(x) on x <= 0. An explicit table covers [-x_max, 0]; beyond it
/// a tail law takes over:
///   zero         eta = 0
///   constant     eta = param
///   polynomial   eta(-k) = floor(c (k+1)^beta) - floor(c k^beta), so H(-k) ~ c k^beta
///   exponential  eta(-k) = ceil(exp(rho k)); breaks the growth condition
/// The table for k <= x_max is free, which lets finite-support profiles and
/// perturbed tails share one type.
class EtaProfile {
 public:
  EtaProfile(std::vector<long> table, TailLaw law, double param = 0.0, double scale = 1.0);

  static EtaProfile finite(std::vector<long> table);
  static EtaProfile constant(long a);
  static EtaProfile polynomial(double beta, double c = 1.0);
  static EtaProfile exponential(double rho);

  const std::vector<long>& table() const { return table_; }
  TailLaw law() const { return law_; }
  double param() const { return param_; }
  double scale() const { return scale_; }
  long x_max() const { return static_cast<long>(table_.size()) - 1; }

  /// eta(-k), k >= 0. Exponential tails saturate at LONG_MAX.
  long eta_at_depth(long k) const;
  long eta(long x) const { return eta_at_depth(-x); }

  /// Cumulative count H(-k) = sum_{j=0}^{k} eta(-j). H(-1) = 0.
  double cumulative(long k) const;
  double log_cumulative(long k) const;

  /// Support is finite (zero tail).
  bool finite_support() const { return law_ == TailLaw::zero; }
  /// Sub-exponential growth: sum exp(theta x) eta(x) < inf for every theta > 0.
  bool satisfies_growth_condition() const { return law_ != TailLaw::exponential; }

  /// sum_{k >= k0} eta(-k) exp(-theta k), with a certified remainder for non-closed
  /// forms. Throws DivergentSum when the series diverges.
  double weighted_tail(double theta, long k0 = 0) const;

  friend bool operator==(const EtaProfile&, const EtaProfile&) = default;

 private:
  double tail_cumulative_from(long k) const;  // sum_{j = x_max+1}^{k} eta(-j)
  double log_tail_cumulative_from(long k) const;

  std::vector<long> table_;
  TailLaw law_;
  double param_;
  double scale_;
  double table_total_ = 0.0;
};

enum class GrowthVerdict { satisfied, violated };

struct GrowthCheck {
  GrowthVerdict verdict;
  std::optional<double> value;  // sum_{x <= 0} exp(theta x) eta(x), when finite
};

GrowthCheck check_growth_condition(const EtaProfile& profile, double theta);

/// Sites x < below carry eta(x - origin) particles each, all sitting on their birth
/// site with indices 1..eta.
struct LeftExtension {
  long below;
  EtaProfile profile;
  long origin;

  friend bool operator==(const LeftExtension&, const LeftExtension&) = default;
};

/// w = (F, r, A). Explicit particles live in `particles`; an optional left extension
/// describes infinitely many (or just many) unmoved particles further left.
class ParticleConfiguration {
 public:
  long front = 0;
  int a = 1;  // particles activated per newly visited site
  std::map<Birthplace, long> particles;
  std::optional<LeftExtension> extension;

  static ParticleConfiguration delta(long u);
  static ParticleConfiguration a_delta(long u, int a);
  static ParticleConfiguration I(long u, int a);
  /// eta_w = profile with r = 0, all particles at their birth sites.
  static ParticleConfiguration from_profile(const EtaProfile& profile, int a);

  bool is_finite() const;
  /// Checks max F <= r, nonempty A, a >= 1. Throws std::invalid_argument.
  void validate() const;

  ParticleConfiguration oplus(long q) const;
  /// w(x, i): the single particle (x, i) with the same front.
  ParticleConfiguration single(Birthplace b) const;
  /// Extension sites >= lowest_site become explicit particles.
  ParticleConfiguration materialized(long lowest_site) const;
  /// Drops the extension entirely (keeps explicit particles).
  ParticleConfiguration truncated() const;

  std::size_t explicit_count() const { return particles.size(); }

  /// eta_w(x): number of particles sitting at x.
  long occupancy(long x) const;
  /// Sparse occupancy of explicit particles plus extension sites >= lowest_site.
  std::map<long, long> occupancy_map(long lowest_site) const;

  double f_theta(double theta) const;
  /// Same functional through sum_x eta_w(x) exp(theta (x - r)).
  double f_theta_by_occupancy(double theta) const;
  /// sum over particles born at x <= z of exp(theta (F - r)).
  double phi(long z, double theta) const;
  /// number of particles born in [z1+1, z2] and currently inside [z1+1, z2].
  long m_window(long z1, long z2) const;
  /// H_w(x) = sum_{y=x}^{0} eta_w(y); requires r = 0 and x <= 0.
  double H(long x) const;

  std::string to_text() const;
  static ParticleConfiguration from_text(const std::string& text);

  friend bool operator==(const ParticleConfiguration&, const ParticleConfiguration&) = default;

 private:
  double extension_weight(long max_site, double theta) const;
};

}  // namespace frontprop
