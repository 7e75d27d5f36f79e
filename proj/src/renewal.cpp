#include "frontprop/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "frontprop/analytics.hpp"
#include "frontprop/hitting.hpp"

namespace frontprop {

const char* to_string(RenewalMode mode) { return mode == RenewalMode::strict ? "strict" : "diagnostic"; }

RenewalMode renewal_mode_from_string(const std::string& name) {
  if (name == "strict") return RenewalMode::strict;
  if (name == "diagnostic") return RenewalMode::diagnostic;
  throw std::invalid_argument("unknown renewal mode '" + name + "'");
}

long strict_M(int a) { return 4L * (a + 9); }

long RenewalParams::window() const {
  long w = static_cast<long>(std::floor(std::pow(static_cast<double>(L), 0.25)));
  while ((w + 1) * (w + 1) * (w + 1) * (w + 1) <= L) ++w;
  while (w > 0 && w * w * w * w > L) --w;
  return w;
}

ParamCheck validate_params(const RenewalCandidate& c) {
  ParamCheck out;
  RenewalParams& p = out.params;
  p.a = c.a;
  p.theta = c.theta;
  p.alpha1 = c.alpha1;
  p.alpha2 = c.alpha2;
  p.eps0 = c.eps0;
  p.p = c.p;
  p.L = c.L;
  p.mode = c.mode;
  p.alpha_hat0 = c.alpha_hat0;
  p.M = c.mode == RenewalMode::strict ? strict_M(c.a) : c.M;
  p.M_prime = p.M / 4 - 1;
  const long m1 = p.M + 1;
  p.required_L = m1 * m1 * m1 * m1;

  auto& v = out.violations;
  if (c.a < 1) v.push_back("a < 1");
  if (p.M < 1) v.push_back("M < 1");
  if (c.L < 1) v.push_back("L < 1");
  if (!(c.theta > 0)) v.push_back("θ ≤ 0");
  if (!(c.eps0 >= 0 && c.eps0 < 0.5)) v.push_back("ε0 outside [0, 1/2)");
  if (!(c.p > 0)) v.push_back("p ≤ 0");
  if (!(c.alpha_hat0 > 0)) v.push_back("α̂(0) not supplied");
  if (!(c.alpha1 > 0)) v.push_back("α1 ≤ 0");
  if (!(c.alpha1 < c.alpha2)) v.push_back("α1 ≥ α2");
  if (!(c.alpha2 < c.alpha_hat0)) v.push_back("α2 ≥ α̂(0)");
  if (c.theta > 0) {
    const double drift = (2 * (std::cosh(c.theta) - 1) + 4 * c.eps0 * std::sinh(c.theta)) / c.theta;
    if (!(drift < c.alpha1)) v.push_back("θ⁻¹(2(cosh θ−1)+4ε0 sinh θ) ≥ α1");
    if (!(c.p * std::exp(c.theta) < 1)) v.push_back("p·e^θ ≥ 1");
    if (c.L >= 1 && !(c.a * std::exp(-static_cast<double>(c.L) * c.theta) / (1 - std::exp(-c.theta)) < c.p))
      v.push_back("a·e^{−Lθ}/(1−e^{−θ}) ≥ p");
  }
  if (!(4 * c.eps0 < c.alpha1)) v.push_back("4ε0 ≥ α1");
  if (c.mode == RenewalMode::strict && c.L < p.required_L)
    v.push_back("L^{1/4} < M+1 (L ≥ " + std::to_string(p.required_L) + " required)");
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Walks born at base, base+1, ... in their own clocks, created on demand.
class WindowWalks {
 public:
  WindowWalks(const RandomField& field, long base, int a, double eps) : field_(field), base_(base), a_(a), eps_(eps) {}

  // First time any walk born in [lo, hi] reaches `level` (own clocks), if some walk
  // gets there while its clock is <= limit.
  std::optional<double> first_hit(long lo, long hi, long level, double limit) {
    while (base_ + static_cast<long>(ladders_.size()) / a_ <= hi)
      for (int i = 1; i <= a_; ++i) {
        const long z = base_ + static_cast<long>(ladders_.size()) / a_;
        ladders_.emplace_back(field_, Birthplace{z, i}, eps_, z, Stream::base());
      }
    std::optional<double> best;
    for (long z = lo; z <= hi; ++z)
      for (int i = 1; i <= a_; ++i) {
        auto h = ladders_[static_cast<std::size_t>((z - base_) * a_ + (i - 1))].reach_within(level, limit);
        if (h && (!best || *h < *best)) best = h;
      }
    if (best && *best <= limit) return best;
    return std::nullopt;
  }

 private:
  const RandomField& field_;
  long base_;
  int a_;
  double eps_;
  std::vector<WalkLadder> ladders_;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double extension_phi(const std::optional<LeftExtension>& ext, long front, long z, double theta) {
  if (!ext) return 0.0;
  ParticleConfiguration tail;
  tail.front = front;
  tail.extension = ext;
  return tail.phi(z, theta);
}

}  // namespace

long AuxiliaryFront::at(double t) const {
  if (t < 0 || t > horizon) throw std::out_of_range("AuxiliaryFront::at: t outside [0, horizon]");
  return base + static_cast<long>(std::upper_bound(cumulative.begin(), cumulative.end(), t) - cumulative.begin());
}

AuxiliaryFront auxiliary_front(const RandomField& field, long base, int a, long M, double eps, double horizon) {
  if (M < 1 || a < 1) throw std::invalid_argument("auxiliary_front: need M, a >= 1");
  if (!(horizon >= 0)) throw std::invalid_argument("auxiliary_front: horizon must be >= 0");
  AuxiliaryFront af;
  af.base = base;
  af.horizon = horizon;
  WindowWalks walks(field, base, a, eps);
  double total = 0.0;
  for (long k = 1;; ++k) {
    const auto nu = walks.first_hit(std::max(base, base + k - M), base + k - 1, base + k, horizon - total);
    if (!nu) {
      af.censored = true;
      return af;
    }
    total += *nu;
    af.nu.push_back(*nu);
    af.cumulative.push_back(total);
  }
}

Estimate alpha_hat(double eps, int a, long M, double horizon, int replicas, std::uint64_t seed) {
  if (replicas < 2) throw std::invalid_argument("alpha_hat: need >= 2 replicas");
  if (!(horizon > 0)) throw std::invalid_argument("alpha_hat: horizon must be positive");
  std::vector<double> speeds;
  for (int i = 0; i < replicas; ++i) {
    RandomField field(seed ^ static_cast<std::uint64_t>(i));
    const AuxiliaryFront af = auxiliary_front(field, 0, a, M, eps, horizon);
    speeds.push_back(static_cast<double>(af.at(horizon)) / horizon);
  }
  return mean_estimate(speeds);
}

// ---------------------------------------------------------------------------

double running_phi(const Simulation& sim, long z, double theta) {
  const long r = sim.front();
  double s = 0.0;
  for (const auto& w : sim.walks())
    if (w.birth.site <= z) s += std::exp(theta * static_cast<double>(w.position - r));
  return s + extension_phi(sim.snapshot_extension(), r, z, theta);
}

double martingale_N(const Simulation& sim, long z, double theta) {
  const double lam = biased_log_mgf_rate(sim.eps(), theta);
  const long r = sim.front();
  return std::exp(theta * static_cast<double>(r) - lam * sim.time()) * running_phi(sim, z, theta);
}

double psi_statistic(const SimulationTrace& trace, long z, double theta, double t) {
  if (trace.walk_paths.empty()) throw std::logic_error("psi_statistic: walk paths were not recorded");
  const long r = trace.front_at(t);
  double s = 0.0;
  for (const auto& [b, path] : trace.walk_paths) {
    if (b.site > z || path.times.front() > t) continue;
    long best = path.positions.front();
    for (std::size_t k = 0; k < path.times.size() && path.times[k] <= t; ++k) best = std::max(best, path.positions[k]);
    s += std::exp(theta * static_cast<double>(best - r));
  }
  return s + extension_phi(trace.config_at(t).extension, r, z, theta);
}

ParticleConfiguration truncated_shift(const ParticleConfiguration& w, long y) {
  const ParticleConfiguration m = w.extension ? w.materialized(y) : w;
  ParticleConfiguration out;
  out.front = m.front - y;
  out.a = m.a;
  for (const auto& [b, pos] : m.particles)
    if (b.site >= y) out.particles[{b.site - y, b.index}] = pos - y;
  return out;
}

// ---------------------------------------------------------------------------

UVW detect_UVW(const Simulation& start, const RenewalParams& params, const RandomField& field, double censor_T,
               Simulation* end) {
  if (!(censor_T > 0)) throw std::invalid_argument("detect_UVW: censor_T must be positive");
  const long r0 = start.front();
  const double t0 = start.time();
  UVW out;

  // U from the auxiliary front: tilde r first drops below floor(alpha2 t) at t = j/alpha2
  // for the first j with nu_1 + ... + nu_j > j/alpha2.
  {
    WindowWalks walks(field, r0, params.a, start.eps());
    double total = 0.0;
    for (long j = 1;; ++j) {
      const double mark = static_cast<double>(j) / params.alpha2;
      if (mark > censor_T) {
        out.U.inspected = censor_T;
        break;
      }
      const auto nu = walks.first_hit(std::max(r0, r0 + j - params.M), r0 + j - 1, r0 + j, mark - total);
      if (!nu) {
        out.U.time = mark;
        out.U.inspected = mark;
        break;
      }
      total += *nu;
    }
  }

  const double limit = out.U.time ? *out.U.time : censor_T;
  Simulation sim = start;
  const double theta = params.theta;
  const long w_top = r0 - params.L;
  const long v_lo = r0 - params.L + 1;
  const long v_hi = r0 - 1;
  const double tail = extension_phi(sim.snapshot_extension(), r0, w_top, theta);
  auto exact_w_sum = [&] {
    double s = tail;
    for (const auto& w : sim.walks())
      if (w.birth.site <= w_top) s += std::exp(theta * static_cast<double>(w.position - r0));
    return s;
  };
  double w_sum = exact_w_sum();
  std::optional<double> trigger;
  if (w_sum >= 1.0) {
    out.W.time = 0.0;
    trigger = 0.0;
  }
  while (!trigger && sim.next_event_time() <= t0 + limit) {
    const auto step = sim.step();
    if (!step) break;
    const Birthplace b = sim.walks()[step->walk].birth;
    const double rel = step->time - t0;
    const long line = static_cast<long>(std::floor(params.alpha1 * rel));
    if (b.site <= w_top) {
      w_sum += std::exp(theta * static_cast<double>(step->to - r0)) - std::exp(theta * static_cast<double>(step->from - r0));
      if (step->to > step->from) {
        const double bar = std::exp(theta * static_cast<double>(line));
        if (w_sum >= bar * (1 - 1e-12)) {
          w_sum = exact_w_sum();
          if (w_sum >= bar) {
            out.W.time = rel;
            trigger = rel;
          }
        }
      }
    } else if (b.site >= v_lo && b.site <= v_hi && step->to > step->from && step->to > line + r0) {
      out.V.time = rel;
      trigger = rel;
    }
  }
  const double seen = trigger ? *trigger : limit;
  if (!out.V.time) out.V.inspected = seen;
  else out.V.inspected = *out.V.time;
  if (!out.W.time) out.W.inspected = seen;
  else out.W.inspected = *out.W.time;

  if (trigger) {
    out.D.time = trigger;
    out.reason = out.V.time ? "V" : "W";
  } else if (out.U.time) {
    out.D.time = out.U.time;
    out.reason = "U";
    sim.advance_to(t0 + *out.U.time);
  } else {
    out.reason = sim.cap_reached() ? "event cap" : "censored";
    sim.advance_to(t0 + censor_T);
  }
  out.D.inspected = out.D.time ? *out.D.time : seen;
  if (end) *end = std::move(sim);
  return out;
}

std::string RenewalRecord::csv() const {
  std::string out = "attempt,S_k,R_k,D_k,censored,reason\n";
  for (const auto& a : attempts)
    out += std::to_string(a.attempt) + "," + fmt(a.S) + "," + std::to_string(a.R) + "," + (a.D ? fmt(*a.D) : "inf") +
           "," + (a.censored ? "1" : "0") + "," + a.reason + "\n";
  return out;
}

RenewalRecord find_regeneration(Simulation& sim, const RenewalParams& params, const RandomField& field,
                                double horizon, double censor_T) {
  if (!(censor_T > 0)) throw std::invalid_argument("find_regeneration: censor_T must be positive");
  if (!(horizon > sim.time())) throw std::invalid_argument("find_regeneration: horizon already passed");
  RenewalRecord rec;
  rec.start_time = sim.time();
  rec.start_front = sim.front();
  rec.horizon = horizon;
  rec.censor_T = censor_T;
  const long win = params.window();
  long R = sim.front();
  for (int k = 1;; ++k) {
    long y = R;
    for (;;) {
      y += params.L;
      if (!sim.advance_until_front(y, horizon)) {
        rec.reason = sim.cap_reached() ? "event cap reached during block search" : "horizon reached during block search";
        return rec;
      }
      if (running_phi(sim, y - params.L, params.theta) > params.p) continue;
      long m = 0;
      for (const auto& w : sim.walks())
        if (w.birth.site > y - win && w.birth.site <= y && w.position > y - win && w.position <= y) ++m;
      if (2 * m >= static_cast<long>(params.a) * win) break;
    }
    const double S = sim.time();
    Simulation after = sim;
    const UVW uvw = detect_UVW(sim, params, field, censor_T, &after);
    if (uvw.D.time) {
      rec.attempts.push_back({k, S, y, S + *uvw.D.time, false, uvw.reason});
      sim = std::move(after);
      R = sim.front();
      continue;
    }
    rec.attempts.push_back({k, S, y, std::nullopt, true, "no trigger within " + fmt(censor_T)});
    rec.K = k;
    rec.kappa = S;
    rec.r_kappa = y;
    rec.censored = false;
    rec.reason = "regenerated";
    return rec;
  }
}

std::vector<RenewalRecord> regeneration_chain(const ParticleConfiguration& w, double eps, const RenewalParams& params,
                                              const RandomField& field, int count, double horizon, double censor_T) {
  SimulationOptions opts;
  opts.eps = eps;
  opts.tol = 1e-9;
  opts.truncation_horizon = horizon + censor_T;
  Simulation sim(w, field, opts);
  std::vector<RenewalRecord> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(find_regeneration(sim, params, field, horizon, censor_T));
    if (out.back().censored) break;
  }
  return out;
}

double RenewalSpeed::censored_fraction() const {
  const double n = static_cast<double>(uncensored + censored);
  return n > 0 ? static_cast<double>(censored) / n : 0.0;
}

RenewalSpeed renewal_speed(const std::vector<RenewalIncrement>& increments, std::size_t censored,
                           std::size_t min_records) {
  if (increments.size() < std::max<std::size_t>(min_records, 2))
    throw std::invalid_argument("renewal_speed: " + std::to_string(increments.size()) +
                                " uncensored records, need " + std::to_string(min_records));
  std::vector<double> dr, dk;
  for (const auto& inc : increments) {
    dr.push_back(inc.dr);
    dk.push_back(inc.dkappa);
  }
  RenewalSpeed out;
  out.speed = ratio_estimate(dr, dk);
  out.uncensored = increments.size();
  out.censored = censored;
  return out;
}

}  // namespace frontprop
