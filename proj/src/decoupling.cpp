#include "frontprop/decoupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "frontprop/analytics.hpp"
#include "frontprop/simulator.hpp"

namespace frontprop {

void DecoupleSpec::validate() const {
  if (m < 1) throw std::invalid_argument("DecoupleSpec: m must be >= 1");
  if (ell < 1) throw std::invalid_argument("DecoupleSpec: ell must be >= 1");
  if (j < 0) throw std::invalid_argument("DecoupleSpec: block index must be >= 0");
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("DecoupleSpec: alpha must lie in (0,1)");
  if (a < 1) throw std::invalid_argument("DecoupleSpec: a must be >= 1");
  if (!(horizon > 0)) throw std::invalid_argument("DecoupleSpec: horizon must be positive");
}

double DecoupleSpec::threshold() const {
  const double ml = static_cast<double>(m * ell);
  return alpha * ml * ml;
}

const char* to_string(ChainVariant v) {
  switch (v) {
    case ChainVariant::J: return "J";
    case ChainVariant::K: return "K";
    case ChainVariant::L: return "L";
  }
  return "?";
}

long source_depth(const DecoupleSpec& spec) {
  spec.validate();
  return truncation_cutoff(EtaProfile::constant(spec.a), spec.horizon, spec.tol).depth;
}

namespace {

enum class SourceSet { all, remote, near };

ChainResult block_chain(const DecoupleSpec& spec, const RandomField& field, SourceSet set, bool fresh_remote) {
  spec.validate();
  if (spec.m * spec.ell + spec.m > spec.window_cap)
    throw std::invalid_argument("decoupling: window m*ell + m exceeds the oracle cap of " +
                                std::to_string(spec.window_cap) + " sites");
  const long depth = source_depth(spec);
  ChainSpec cs;
  cs.floor_site = spec.base();
  cs.target = spec.target();
  cs.a = spec.a;
  cs.initial_cap = 64;
  const Stream fresh = Stream::fresh(static_cast<std::uint32_t>(spec.j));
  for (long x = spec.base() - depth; x <= spec.base(); ++x) {
    const bool remote = x <= spec.remote_top();
    if (set == SourceSet::remote && !remote) continue;
    if (set == SourceSet::near && remote) continue;
    for (int i = 1; i <= spec.a; ++i)
      cs.sources.push_back({{x, i}, x, 0.0, remote && fresh_remote ? fresh : Stream::base()});
  }
  if (cs.sources.empty()) return ChainResult{};
  return solve_chain(field, cs);
}

double value(const ChainResult& r) { return r.time ? *r.time : INFINITY; }

}  // namespace

ChainResult decoupled_T(const DecoupleSpec& spec, const RandomField& field) {
  return block_chain(spec, field, SourceSet::all, true);
}

ChainResult block_T(const DecoupleSpec& spec, const RandomField& field) {
  return block_chain(spec, field, SourceSet::all, false);
}

ChainResult restricted_chain(const DecoupleSpec& spec, ChainVariant which, const RandomField& field) {
  switch (which) {
    case ChainVariant::J: return block_chain(spec, field, SourceSet::remote, true);
    case ChainVariant::K: return block_chain(spec, field, SourceSet::remote, false);
    case ChainVariant::L: return block_chain(spec, field, SourceSet::near, false);
  }
  throw std::logic_error("restricted_chain: bad variant");
}

bool DecoupleSample::identities_hold() const {
  return std::min(J, L) == T_prime && std::min(K, L) == T;
}

bool DecoupleSample::inclusion_holds() const { return !(std::min(J, K) >= L) || T_prime == T; }

DecoupleSample decouple_sample(const DecoupleSpec& spec, const RandomField& field) {
  DecoupleSample s;
  const ChainResult t = block_T(spec, field);
  const ChainResult tp = decoupled_T(spec, field);
  const ChainResult j = restricted_chain(spec, ChainVariant::J, field);
  const ChainResult k = restricted_chain(spec, ChainVariant::K, field);
  const ChainResult l = restricted_chain(spec, ChainVariant::L, field);
  s.T = value(t);
  s.T_prime = value(tp);
  s.J = value(j);
  s.K = value(k);
  s.L = value(l);
  s.certified = t.certified && tp.certified && j.certified && k.certified && l.certified;
  const double th = spec.threshold();
  s.D = std::min(s.J, s.K) < th;
  s.F = s.L >= th;
  return s;
}

std::vector<double> decoupled_family(const DecoupleSpec& spec, int count, const RandomField& field) {
  std::vector<double> out;
  for (int p = 0; p < count; ++p) {
    DecoupleSpec sp = spec;
    sp.j = spec.j + p * (spec.ell + 1);
    out.push_back(value(decoupled_T(sp, field)));
  }
  return out;
}

double D_union_bound(const DecoupleSpec& spec) {
  spec.validate();
  const double t = spec.threshold();
  const SkellamLaw& law = skellam_law(t);
  const long start = spec.m * spec.ell + 1;
  double s = 0.0;
  for (long d = start; d <= std::max(start, law.support_bound()); ++d) {
    const double h = law.hit_probability(d);
    s += h;
    if (h == 0.0) break;
  }
  return std::min(1.0, 2.0 * spec.a * s);
}

double F_product_bound(const DecoupleSpec& spec) {
  spec.validate();
  const double t = spec.threshold();
  const SkellamLaw& law = skellam_law(t);
  double lg = 0.0;
  for (long x = -spec.m * spec.ell + 1; x <= 0; ++x) lg += spec.a * law.log_Gbar(1 - x);
  return std::exp(lg);
}

EventRates event_rates(const DecoupleSpec& spec, std::uint64_t seed, std::size_t samples) {
  if (samples == 0) throw std::invalid_argument("event_rates: need samples");
  DecoupleSpec wide = spec;
  // Only threshold comparisons are taken here, so the exact-value cap is lifted.
  wide.window_cap = std::max(spec.window_cap, spec.m * spec.ell + spec.m);
  std::size_t nd = 0, nf = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    RandomField field(seed ^ static_cast<std::uint64_t>(i));
    const double th = wide.threshold();
    const double jk = std::min(value(restricted_chain(wide, ChainVariant::J, field)),
                               value(restricted_chain(wide, ChainVariant::K, field)));
    if (jk < th) ++nd;
    if (value(restricted_chain(wide, ChainVariant::L, field)) >= th) ++nf;
  }
  return {wilson(nd, samples), wilson(nf, samples), D_union_bound(spec), F_product_bound(spec), samples};
}

TailBound hitting_tail_bound(const EtaProfile& profile, long m, double t) {
  if (m < 1) throw std::invalid_argument("hitting_tail_bound: m must be >= 1");
  if (!(t > 0)) throw std::invalid_argument("hitting_tail_bound: t must be positive");
  const SkellamLaw& law = skellam_law(t);
  const long s = static_cast<long>(std::floor(std::sqrt(t)));
  double lp = 0.0;
  for (long k = 0; k <= s; ++k) lp += static_cast<double>(profile.eta_at_depth(k)) * law.log_Gbar(m + k);
  const double coarse = profile.cumulative(s) * law.log_Gbar(m + s);
  return {std::exp(lp), std::exp(coarse)};
}

TailConstants fit_tail_constants(const EtaProfile& profile, long m, double t0, const std::vector<double>& t_grid) {
  double worst = 0.0;
  for (double t : t_grid) {
    if (t < t0) continue;
    const long s = static_cast<long>(std::floor(std::sqrt(t)));
    worst = std::max(worst, Gbar(t, m + s));
  }
  if (worst == 0.0) throw std::invalid_argument("fit_tail_constants: no grid point at or above t0");
  const double rho = 1.0 - worst;
  const long s0 = static_cast<long>(std::floor(std::sqrt(t0)));
  const double A = std::pow(1.0 - rho, -profile.cumulative(s0));
  return {rho, A, t0};
}

}  // namespace frontprop
