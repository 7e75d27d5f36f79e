#include "frontprop/configuration.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace frontprop {

namespace {

// Beyond this size ceil(exp(rho k)) equals exp(rho k) in double precision.
constexpr double kExactIntegerLimit = 4503599627370496.0;  // 2^52

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double log_add(double x, double y) {
  if (x == -INFINITY) return y;
  if (y == -INFINITY) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

}  // namespace

const char* to_string(TailLaw law) {
  switch (law) {
    case TailLaw::zero: return "zero";
    case TailLaw::constant: return "constant";
    case TailLaw::polynomial: return "polynomial";
    case TailLaw::exponential: return "exponential";
  }
  return "?";
}

TailLaw tail_law_from_string(const std::string& name) {
  if (name == "zero") return TailLaw::zero;
  if (name == "constant") return TailLaw::constant;
  if (name == "polynomial") return TailLaw::polynomial;
  if (name == "exponential") return TailLaw::exponential;
  throw std::invalid_argument("unsupported tail law '" + name + "'");
}

EtaProfile::EtaProfile(std::vector<long> table, TailLaw law, double param, double scale)
    : table_(std::move(table)), law_(law), param_(param), scale_(scale) {
  if (table_.empty()) throw std::invalid_argument("eta profile needs a table entry at x=0");
  for (long v : table_) {
    if (v < 0) throw std::invalid_argument("eta profile entries must be nonnegative");
    table_total_ += static_cast<double>(v);
  }
  switch (law_) {
    case TailLaw::zero: break;
    case TailLaw::constant:
      if (param_ < 0 || param_ != std::floor(param_))
        throw std::invalid_argument("constant tail needs a nonnegative integer");
      break;
    case TailLaw::polynomial:
      if (!(param_ > 0) || !(scale_ >= 1.0))
        throw std::invalid_argument("polynomial tail needs beta > 0 and c >= 1");
      break;
    case TailLaw::exponential:
      if (!(param_ > 0)) throw std::invalid_argument("exponential tail needs rho > 0");
      break;
  }
  const bool any_positive = table_total_ > 0 || (law_ != TailLaw::zero && eta_at_depth(x_max() + 1) > 0) ||
                            law_ == TailLaw::polynomial || law_ == TailLaw::exponential;
  if (!any_positive) throw std::invalid_argument("eta profile has no particles");
}

EtaProfile EtaProfile::finite(std::vector<long> table) {
  return EtaProfile(std::move(table), TailLaw::zero);
}

EtaProfile EtaProfile::constant(long a) { return EtaProfile({a}, TailLaw::constant, static_cast<double>(a)); }

EtaProfile EtaProfile::polynomial(double beta, double c) {
  return EtaProfile({static_cast<long>(std::floor(c))}, TailLaw::polynomial, beta, c);
}

EtaProfile EtaProfile::exponential(double rho) { return EtaProfile({1}, TailLaw::exponential, rho); }

long EtaProfile::eta_at_depth(long k) const {
  if (k < 0) return 0;
  if (k <= x_max()) return table_[static_cast<std::size_t>(k)];
  switch (law_) {
    case TailLaw::zero: return 0;
    case TailLaw::constant: return static_cast<long>(param_);
    case TailLaw::polynomial:
      return static_cast<long>(std::floor(scale_ * std::pow(k + 1.0, param_)) -
                               std::floor(scale_ * std::pow(static_cast<double>(k), param_)));
    case TailLaw::exponential: {
      const double v = std::exp(param_ * static_cast<double>(k));
      return v >= 9.0e18 ? LONG_MAX : static_cast<long>(std::ceil(v));
    }
  }
  return 0;
}

double EtaProfile::tail_cumulative_from(long k) const {
  const long j0 = x_max() + 1;
  if (k < j0) return 0.0;
  switch (law_) {
    case TailLaw::zero: return 0.0;
    case TailLaw::constant: return param_ * static_cast<double>(k - j0 + 1);
    case TailLaw::polynomial:
      return std::floor(scale_ * std::pow(k + 1.0, param_)) - std::floor(scale_ * std::pow(j0 + 0.0, param_));
    case TailLaw::exponential: return std::exp(log_tail_cumulative_from(k));
  }
  return 0.0;
}

double EtaProfile::log_tail_cumulative_from(long k) const {
  const long j0 = x_max() + 1;
  if (k < j0) return -INFINITY;
  if (law_ != TailLaw::exponential) return std::log(tail_cumulative_from(k));
  const double rho = param_;
  // Exact integer terms while ceil matters, geometric closed form afterwards.
  const long exact_end = std::min(k, static_cast<long>(std::log(kExactIntegerLimit) / rho));
  double exact = 0.0;
  for (long j = j0; j <= exact_end; ++j) exact += std::ceil(std::exp(rho * static_cast<double>(j)));
  double log_sum = exact > 0 ? std::log(exact) : -INFINITY;
  const long g0 = std::max(j0, exact_end + 1);
  if (k >= g0) {
    // sum_{j=g0}^{k} e^{rho j} = e^{rho k} (1 - e^{-rho (k - g0 + 1)}) / (1 - e^{-rho})
    const double log_geo = rho * static_cast<double>(k) +
                           std::log(-std::expm1(-rho * static_cast<double>(k - g0 + 1))) -
                           std::log(-std::expm1(-rho));
    log_sum = log_add(log_sum, log_geo);
  }
  return log_sum;
}

double EtaProfile::cumulative(long k) const {
  if (k < 0) return 0.0;
  if (k <= x_max()) {
    double s = 0.0;
    for (long j = 0; j <= k; ++j) s += static_cast<double>(table_[static_cast<std::size_t>(j)]);
    return s;
  }
  return table_total_ + tail_cumulative_from(k);
}

double EtaProfile::log_cumulative(long k) const {
  if (k < 0) return -INFINITY;
  if (k <= x_max() || law_ != TailLaw::exponential) return std::log(cumulative(k));
  const double head = table_total_ > 0 ? std::log(table_total_) : -INFINITY;
  return log_add(head, log_tail_cumulative_from(k));
}

double EtaProfile::weighted_tail(double theta, long k0) const {
  if (!(theta > 0)) throw std::invalid_argument("theta must be positive");
  k0 = std::max(k0, 0L);
  double sum = 0.0;
  for (long k = k0; k <= x_max(); ++k)
    sum += static_cast<double>(table_[static_cast<std::size_t>(k)]) * std::exp(-theta * static_cast<double>(k));
  const long k1 = std::max(k0, x_max() + 1);
  const double q = std::exp(-theta);
  switch (law_) {
    case TailLaw::zero: return sum;
    case TailLaw::constant: return sum + param_ * std::exp(-theta * static_cast<double>(k1)) / (1.0 - q);
    case TailLaw::polynomial: {
      // eta(-k) <= c (k+1)^beta, so once the bound's term ratio drops below one the
      // remainder is dominated by a geometric series.
      for (long k = k1;; ++k) {
        sum += static_cast<double>(eta_at_depth(k)) * std::exp(-theta * static_cast<double>(k));
        const double ratio = q * std::pow((k + 3.0) / (k + 2.0), param_);
        if (ratio < 1.0) {
          const double remainder =
              scale_ * std::pow(k + 2.0, param_) * std::exp(-theta * (k + 1.0)) / (1.0 - ratio);
          if (remainder <= 1e-17 * sum) return sum;
        }
        if (k - k1 > 100000000L) throw DivergentSum("polynomial tail sum failed to converge");
      }
    }
    case TailLaw::exponential: {
      const double rho = param_;
      if (theta <= rho) {
        throw DivergentSum("sum eta(x) exp(theta x) diverges: exponential tail rate " + format_double(rho) +
                           " >= theta " + format_double(theta));
      }
      const long exact_end = static_cast<long>(std::log(kExactIntegerLimit) / rho);
      long k = k1;
      for (; k <= exact_end; ++k)
        sum += std::ceil(std::exp(rho * static_cast<double>(k))) * std::exp(-theta * static_cast<double>(k));
      // Remaining terms are e^{(rho - theta) k} up to a relative 2^-52.
      return sum + std::exp((rho - theta) * static_cast<double>(k)) / (1.0 - std::exp(rho - theta));
    }
  }
  return sum;
}

GrowthCheck check_growth_condition(const EtaProfile& profile, double theta) {
  if (!(theta > 0)) throw std::invalid_argument("theta must be positive");
  if (profile.law() == TailLaw::exponential && theta <= profile.param()) {
    return {GrowthVerdict::violated, std::nullopt};
  }
  const GrowthVerdict verdict =
      profile.satisfies_growth_condition() ? GrowthVerdict::satisfied : GrowthVerdict::violated;
  return {verdict, profile.weighted_tail(theta, 0)};
}

// ---------------------------------------------------------------------------

ParticleConfiguration ParticleConfiguration::delta(long u) {
  ParticleConfiguration w;
  w.front = u;
  w.a = 1;
  w.particles[{u, 1}] = u;
  return w;
}

ParticleConfiguration ParticleConfiguration::a_delta(long u, int a) {
  if (a < 1) throw std::invalid_argument("a must be >= 1");
  ParticleConfiguration w;
  w.front = u;
  w.a = a;
  for (int i = 1; i <= a; ++i) w.particles[{u, i}] = u;
  return w;
}

ParticleConfiguration ParticleConfiguration::I(long u, int a) {
  if (a < 1) throw std::invalid_argument("a must be >= 1");
  ParticleConfiguration w;
  w.front = u;
  w.a = a;
  w.extension = LeftExtension{u + 1, EtaProfile::constant(a), u};
  return w;
}

ParticleConfiguration ParticleConfiguration::from_profile(const EtaProfile& profile, int a) {
  if (a < 1) throw std::invalid_argument("a must be >= 1");
  ParticleConfiguration w;
  w.front = 0;
  w.a = a;
  w.extension = LeftExtension{1, profile, 0};
  if (profile.finite_support()) w = w.materialized(-profile.x_max());
  w.validate();
  return w;
}

bool ParticleConfiguration::is_finite() const {
  return !extension || (extension->profile.finite_support() &&
                        extension->below <= extension->origin - extension->profile.x_max());
}

void ParticleConfiguration::validate() const {
  if (a < 1) throw std::invalid_argument("configuration: a must be >= 1");
  for (const auto& [b, pos] : particles) {
    if (pos > front) throw std::invalid_argument("configuration: particle beyond the front");
    if (b.site > front) throw std::invalid_argument("configuration: birthplace beyond the front");
    if (b.index < 1) throw std::invalid_argument("configuration: particle index must be >= 1");
  }
  bool extension_mass = false;
  if (extension) {
    if (extension->below > extension->origin + 1 || extension->below > front + 1)
      throw std::invalid_argument("configuration: extension reaches past its origin or the front");
    extension_mass = !is_finite();
  }
  if (particles.empty() && !extension_mass) throw std::invalid_argument("configuration: A is empty");
}

ParticleConfiguration ParticleConfiguration::oplus(long q) const {
  if (q < 1) throw std::invalid_argument("oplus: q must be >= 1");
  ParticleConfiguration w = *this;
  for (long x = front + 1; x <= front + q; ++x)
    for (int i = 1; i <= a; ++i) w.particles[{x, i}] = x;
  w.front = front + q;
  return w;
}

ParticleConfiguration ParticleConfiguration::single(Birthplace b) const {
  ParticleConfiguration w;
  w.front = front;
  w.a = a;
  const auto it = particles.find(b);
  if (it != particles.end()) {
    w.particles[b] = it->second;
  } else if (extension && b.site < extension->below && b.index >= 1 &&
             b.index <= extension->profile.eta(b.site - extension->origin)) {
    w.particles[b] = b.site;
  } else {
    throw std::invalid_argument("single: birthplace not in A");
  }
  return w;
}

ParticleConfiguration ParticleConfiguration::materialized(long lowest_site) const {
  ParticleConfiguration w = *this;
  if (!extension || lowest_site >= extension->below) return w;
  LeftExtension& ext = *w.extension;
  for (long x = lowest_site; x < ext.below; ++x) {
    const long n = ext.profile.eta(x - ext.origin);
    for (long i = 1; i <= n; ++i) w.particles[{x, static_cast<int>(i)}] = x;
  }
  ext.below = lowest_site;
  // A flat constant profile does not depend on where its origin sits; re-anchor it so
  // equal configurations compare equal.
  const auto& t = ext.profile.table();
  if (ext.profile.law() == TailLaw::constant &&
      std::all_of(t.begin(), t.end(), [&](long v) { return v == static_cast<long>(ext.profile.param()); })) {
    ext.profile = EtaProfile::constant(static_cast<long>(ext.profile.param()));
    ext.origin = ext.below - 1;
  }
  return w;
}

ParticleConfiguration ParticleConfiguration::truncated() const {
  ParticleConfiguration w = *this;
  w.extension.reset();
  return w;
}

long ParticleConfiguration::occupancy(long x) const {
  long n = 0;
  for (const auto& [b, pos] : particles) n += pos == x;
  if (extension && x < extension->below) n += extension->profile.eta(x - extension->origin);
  return n;
}

std::map<long, long> ParticleConfiguration::occupancy_map(long lowest_site) const {
  std::map<long, long> occ;
  for (const auto& [b, pos] : particles) ++occ[pos];
  if (extension) {
    for (long x = lowest_site; x < extension->below; ++x) {
      const long n = extension->profile.eta(x - extension->origin);
      if (n > 0) occ[x] += n;
    }
  }
  return occ;
}

double ParticleConfiguration::extension_weight(long max_site, double theta) const {
  if (!extension) return 0.0;
  const long top = std::min(max_site, extension->below - 1);
  const long k0 = extension->origin - top;
  return std::exp(theta * static_cast<double>(extension->origin - front)) *
         extension->profile.weighted_tail(theta, k0);
}

double ParticleConfiguration::f_theta(double theta) const {
  if (!(theta > 0)) throw std::invalid_argument("theta must be positive");
  double s = 0.0;
  for (const auto& [b, pos] : particles) s += std::exp(theta * static_cast<double>(pos - front));
  return s + extension_weight(front, theta);
}

double ParticleConfiguration::f_theta_by_occupancy(double theta) const {
  if (!(theta > 0)) throw std::invalid_argument("theta must be positive");
  constexpr long kExplicitDepth = 256;
  long lowest = front;
  if (extension) lowest = extension->below - kExplicitDepth;
  double s = 0.0;
  for (const auto& [x, n] : occupancy_map(lowest))
    s += static_cast<double>(n) * std::exp(theta * static_cast<double>(x - front));
  if (extension) s += extension_weight(lowest - 1, theta);
  return s;
}

double ParticleConfiguration::phi(long z, double theta) const {
  if (!(theta > 0)) throw std::invalid_argument("theta must be positive");
  double s = 0.0;
  for (const auto& [b, pos] : particles) {
    if (b.site > z) break;  // map is ordered by birth site
    s += std::exp(theta * static_cast<double>(pos - front));
  }
  return s + extension_weight(z, theta);
}

long ParticleConfiguration::m_window(long z1, long z2) const {
  if (!(z1 < z2)) throw std::invalid_argument("m_window: need z1 < z2");
  long n = 0;
  for (auto it = particles.lower_bound({z1 + 1, INT_MIN}); it != particles.end() && it->first.site <= z2; ++it)
    n += it->second >= z1 + 1 && it->second <= z2;
  if (extension) {
    for (long x = z1 + 1; x <= std::min(z2, extension->below - 1); ++x)
      n += extension->profile.eta(x - extension->origin);
  }
  return n;
}

double ParticleConfiguration::H(long x) const {
  if (front != 0) throw std::invalid_argument("H_w requires r = 0");
  if (x > 0) throw std::invalid_argument("H_w requires x <= 0");
  double n = 0.0;
  for (const auto& [b, pos] : particles) n += pos >= x && pos <= 0;
  if (extension) {
    const long top = std::min(0L, extension->below - 1);
    if (top >= x) {
      const auto& p = extension->profile;
      n += p.cumulative(extension->origin - x) - p.cumulative(extension->origin - top - 1);
    }
  }
  return n;
}

std::string ParticleConfiguration::to_text() const {
  std::ostringstream out;
  out << "front=" << front << "\n";
  out << "a=" << a << "\n";
  if (!extension) {
    out << "tail=none\n";
  } else {
    const auto& p = extension->profile;
    out << "tail=" << to_string(p.law()) << " param=" << format_double(p.param())
        << " scale=" << format_double(p.scale()) << " below=" << extension->below
        << " origin=" << extension->origin << " table=";
    for (std::size_t k = 0; k < p.table().size(); ++k) out << (k ? "," : "") << p.table()[k];
    out << "\n";
  }
  for (const auto& [b, pos] : particles) out << b.site << " " << b.index << " " << pos << "\n";
  return out.str();
}

ParticleConfiguration ParticleConfiguration::from_text(const std::string& text) {
  ParticleConfiguration w;
  w.particles.clear();
  std::istringstream in(text);
  std::string line;
  bool have_front = false;
  int line_no = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("configuration text line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (line.rfind("front=", 0) == 0) {
      w.front = std::stol(line.substr(6));
      have_front = true;
    } else if (line.rfind("a=", 0) == 0) {
      w.a = std::stoi(line.substr(2));
    } else if (line.rfind("tail=", 0) == 0) {
      std::string token;
      std::map<std::string, std::string> fields;
      while (ls >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) fail("malformed token '" + token + "'");
        fields[token.substr(0, eq)] = token.substr(eq + 1);
      }
      if (fields["tail"] == "none") continue;
      for (const char* key : {"param", "scale", "below", "origin", "table"})
        if (!fields.count(key)) fail(std::string("missing ") + key);
      std::vector<long> table;
      std::istringstream ts(fields["table"]);
      std::string cell;
      while (std::getline(ts, cell, ',')) table.push_back(std::stol(cell));
      EtaProfile profile(table, tail_law_from_string(fields["tail"]), std::strtod(fields["param"].c_str(), nullptr),
                         std::strtod(fields["scale"].c_str(), nullptr));
      w.extension = LeftExtension{std::stol(fields["below"]), profile, std::stol(fields["origin"])};
    } else {
      long site = 0, pos = 0;
      int index = 0;
      if (!(ls >> site >> index >> pos)) fail("expected 'site i position'");
      w.particles[{site, index}] = pos;
    }
  }
  if (!have_front) throw std::invalid_argument("configuration text: missing front=");
  w.validate();
  return w;
}

}  // namespace frontprop
