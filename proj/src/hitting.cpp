#include "frontprop/hitting.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "frontprop/simulator.hpp"

namespace frontprop {

HitResult walk_hit(const RandomField& field, Birthplace b, double eps, long start, long target, std::uint64_t cap,
                   Stream stream) {
  validate_bias(eps);
  if (start == target) throw std::invalid_argument("walk_hit: start equals target");
  HitResult out;
  long position = start;
  double elapsed = 0.0;
  for (std::uint64_t n = 1; n <= cap; ++n) {
    const WalkDraw d = field.walk_draw(b, n, stream);
    elapsed += d.clock;
    position += step_sign_unchecked(d.step_unif, eps);
    if (position == target) {
      out.time = elapsed;
      out.steps = n;
      return out;
    }
  }
  out.steps = cap;
  out.elapsed_at_cap = elapsed;
  return out;
}

WalkLadder::WalkLadder(const RandomField& field, Birthplace b, double eps, long start, Stream stream)
    : field_(&field), birth_(b), eps_(eps), start_(start), stream_(stream), position_(start) {}

std::optional<double> WalkLadder::reach(long level, std::uint64_t cap) {
  if (level <= start_) throw std::invalid_argument("WalkLadder::reach: level must exceed the start");
  const std::size_t h = static_cast<std::size_t>(level - start_);
  while (ladder_.size() < h && steps_ < cap) {
    const WalkDraw d = field_->walk_draw(birth_, steps_ + 1, stream_);
    elapsed_ += d.clock;
    position_ += step_sign_unchecked(d.step_unif, eps_);
    ++steps_;
    if (position_ > start_ + static_cast<long>(ladder_.size())) ladder_.push_back(elapsed_);
  }
  if (ladder_.size() >= h) return ladder_[h - 1];
  return std::nullopt;
}

std::optional<double> WalkLadder::reach_within(long level, double time_limit) {
  if (level <= start_) throw std::invalid_argument("WalkLadder::reach_within: level must exceed the start");
  const std::size_t h = static_cast<std::size_t>(level - start_);
  while (ladder_.size() < h && elapsed_ <= time_limit) {
    const WalkDraw d = field_->walk_draw(birth_, steps_ + 1, stream_);
    elapsed_ += d.clock;
    position_ += step_sign_unchecked(d.step_unif, eps_);
    ++steps_;
    if (position_ > start_ + static_cast<long>(ladder_.size())) ladder_.push_back(elapsed_);
  }
  if (ladder_.size() >= h && ladder_[h - 1] <= time_limit) return ladder_[h - 1];
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

struct Walker {
  WalkLadder ladder;
  std::uint64_t cap;
  int source = -1;  // index into spec.sources, or -1 for a walk born on the chain
  long site = 0;    // birth site for chain-born walks
};

}  // namespace

ChainResult solve_chain(const RandomField& field, const ChainSpec& spec) {
  validate_bias(spec.eps);
  if (spec.target <= spec.floor_site) throw std::invalid_argument("solve_chain: target must exceed the floor");
  const long span = spec.target - spec.floor_site;
  std::vector<Walker> walkers;
  for (std::size_t s = 0; s < spec.sources.size(); ++s) {
    const ChainSource& src = spec.sources[s];
    if (src.position > spec.floor_site) throw std::invalid_argument("solve_chain: source above the floor");
    walkers.push_back({WalkLadder(field, src.walk, spec.eps, src.position, src.stream), spec.initial_cap,
                       static_cast<int>(s), src.walk.site});
  }
  const std::size_t first_chain_walker = walkers.size();
  for (long z = spec.floor_site + 1; z < spec.target; ++z)
    for (int i = 1; i <= spec.a; ++i)
      walkers.push_back({WalkLadder(field, {z, i}, spec.eps, z, Stream::base()), spec.initial_cap, -1, z});
  auto chain_walker = [&](long z, int i) -> Walker& {
    return walkers[first_chain_walker + static_cast<std::size_t>((z - spec.floor_site - 1) * spec.a + (i - 1))];
  };

  ChainResult result;
  struct Pred {
    std::size_t walker;
    long from;
  };
  for (;;) {
    std::vector<std::optional<double>> arrival(static_cast<std::size_t>(span));
    std::vector<Pred> pred(static_cast<std::size_t>(span));
    std::vector<bool> needs_more(walkers.size(), false);
    auto at = [&](long x) -> std::optional<double>& { return arrival[static_cast<std::size_t>(x - spec.floor_site - 1)]; };

    for (long x = spec.floor_site + 1; x <= spec.target; ++x) {
      std::optional<double>& best = at(x);
      Pred& p = pred[static_cast<std::size_t>(x - spec.floor_site - 1)];
      for (std::size_t s = 0; s < first_chain_walker; ++s) {
        const double birth = spec.sources[static_cast<std::size_t>(walkers[s].source)].birth_time;
        if (auto h = walkers[s].ladder.reach(x, walkers[s].cap)) {
          const double t = birth + *h;
          if (!best || t < *best) best = t, p = {s, walkers[s].ladder.start()};
        }
      }
      for (long z = spec.floor_site + 1; z < x; ++z) {
        const std::optional<double> born = at(z);
        if (!born) continue;
        for (int i = 1; i <= spec.a; ++i) {
          Walker& w = chain_walker(z, i);
          if (auto h = w.ladder.reach(x, w.cap)) {
            const double t = *born + *h;
            if (!best || t < *best) {
              best = t;
              p = {static_cast<std::size_t>(&w - walkers.data()), z};
            }
          }
        }
      }
    }

    // A walk cut by its cap before reaching x could still beat arrival(x) unless its
    // elapsed time at the cap already exceeds it.
    bool any = false;
    for (long x = spec.floor_site + 1; x <= spec.target; ++x) {
      const std::optional<double> ax = at(x);
      for (std::size_t k = 0; k < walkers.size(); ++k) {
        Walker& w = walkers[k];
        double birth;
        if (w.source >= 0) {
          birth = spec.sources[static_cast<std::size_t>(w.source)].birth_time;
        } else {
          if (w.site >= x) continue;
          const std::optional<double> born = at(w.site);
          if (!born) continue;
          birth = *born;
        }
        if (w.ladder.reach(x, w.cap)) continue;
        if (!ax || birth + w.ladder.elapsed() < *ax) {
          needs_more[k] = true;
          any = true;
        }
      }
    }

    if (!any || !spec.adaptive) {
      result.site_times = arrival;
      result.time = at(spec.target);
      result.certified = !any;
      if (result.time) {
        for (long x = spec.target; x > spec.floor_site;) {
          const Pred& p = pred[static_cast<std::size_t>(x - spec.floor_site - 1)];
          const Walker& w = walkers[p.walker];
          result.chain.insert(result.chain.begin(), {w.ladder.birth(), p.from, x, *at(x)});
          if (w.source >= 0) break;
          x = p.from;
        }
      }
      return result;
    }
    bool grew = false;
    for (std::size_t k = 0; k < walkers.size(); ++k) {
      if (needs_more[k] && walkers[k].cap < spec.max_cap) {
        walkers[k].cap = std::min(spec.max_cap, walkers[k].cap * 2);
        grew = true;
      }
    }
    if (!grew) {
      result.site_times = arrival;
      result.time = at(spec.target);
      result.certified = false;
      return result;
    }
  }
}

namespace {

ParticleConfiguration explicit_form(const ParticleConfiguration& w) {
  if (!w.extension) return w;
  if (!w.is_finite()) throw std::invalid_argument("chain oracle needs a finite configuration");
  return w.materialized(w.extension->origin - w.extension->profile.x_max());
}

}  // namespace

ChainResult chain_oracle(const ParticleConfiguration& w, long u, double eps, const RandomField& field,
                         std::uint64_t cap) {
  if (u <= w.front) throw std::invalid_argument("chain_oracle: target must exceed the front");
  if (u - w.front > kOracleSpan) throw std::invalid_argument("chain_oracle: target beyond oracle scale");
  const ParticleConfiguration m = explicit_form(w);
  ChainSpec spec;
  spec.floor_site = m.front;
  spec.target = u;
  spec.a = m.a;
  spec.eps = eps;
  spec.initial_cap = cap;
  for (const auto& [b, pos] : m.particles) spec.sources.push_back({b, pos, 0.0, Stream::base()});
  return solve_chain(field, spec);
}

std::optional<double> simulated_T(const ParticleConfiguration& w, long u, double eps, const RandomField& field,
                                  std::optional<double> tol, double guard) {
  if (u <= w.front) throw std::invalid_argument("simulated_T: target must exceed the front");
  SimulationOptions opts;
  opts.eps = eps;
  opts.tol = tol;
  opts.truncation_horizon = guard;
  Simulation sim(w, field, opts);
  return sim.advance_until_front(u, guard);
}

ChainResult truncated_T(const ParticleConfiguration& w, long u, double eps, const RandomField& field, long K) {
  if (K < 1) throw std::invalid_argument("truncated_T: K must be >= 1");
  if (u <= w.front) throw std::invalid_argument("truncated_T: target must exceed the front");
  const ParticleConfiguration m = w.extension ? w.materialized(-K) : w;
  ChainSpec spec;
  spec.floor_site = m.front;
  spec.target = u;
  spec.a = m.a;
  spec.eps = eps;
  spec.initial_cap = static_cast<std::uint64_t>(K);
  spec.adaptive = false;
  for (const auto& [b, pos] : m.particles)
    if (b.site >= -K) spec.sources.push_back({b, pos, 0.0, Stream::base()});
  return solve_chain(field, spec);
}

SubadditivitySample subadditivity_check(const ParticleConfiguration& w, long u, long v, double eps,
                                        const RandomField& field, std::optional<double> tol) {
  if (!(w.front < u && u < v)) throw std::invalid_argument("subadditivity_check: need r < u < v");
  constexpr double kGuard = 1e7;
  const auto first = simulated_T(w, u, eps, field, tol, kGuard);
  const auto second = simulated_T(w.oplus(u - w.front), v, eps, field, tol, kGuard);
  if (!first || !second) {
    // The right side exceeds the guard, so it dominates anything finite we could see.
    return {INFINITY, INFINITY, true, false};
  }
  const double rhs = *first + *second;
  const auto lhs = simulated_T(w, v, eps, field, tol, rhs + kTimeSlack);
  const double l = lhs ? *lhs : INFINITY;
  return {l, rhs, l <= rhs + kTimeSlack, std::fabs(l - rhs) <= kTimeSlack};
}

InclusionSample event_inclusion_check(long n, long m, double eps, const RandomField& field) {
  if (n < 1 || m < 1) throw std::invalid_argument("event_inclusion_check: n, m >= 1");
  constexpr double kGuard = 1e7;
  const auto tn = simulated_T(ParticleConfiguration::delta(0), n, eps, field, std::nullopt, kGuard);
  const auto ts = simulated_T(ParticleConfiguration::delta(n), n + m, eps, field, std::nullopt, kGuard);
  if (!tn || !ts) return {tn.value_or(INFINITY), ts.value_or(INFINITY), INFINITY, true};
  const double bound = *tn + *ts;
  const auto tt = simulated_T(ParticleConfiguration::delta(0), n + m, eps, field, std::nullopt, bound + kTimeSlack);
  const double total = tt ? *tt : INFINITY;
  return {*tn, *ts, total, total <= bound + kTimeSlack};
}

}  // namespace frontprop
