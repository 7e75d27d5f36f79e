#include "frontprop/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "frontprop/analytics.hpp"

namespace frontprop {

namespace {

// Chernoff bound on P(sup_{s <= t} xi^eps_s >= y) for the biased rate-2 walk.
// exp(theta xi_s) is a submartingale, so Doob gives exp(t lambda(theta) - theta y);
// theta solves t (2 sinh theta + 4 eps cosh theta) = y.
double chernoff_reach(double t, double eps, double y) {
  if (y <= 0) return 1.0;
  if (y <= 4.0 * eps * t) return 1.0;
  double lo = 0.0;
  double hi = std::asinh(y / (2.0 * t)) + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double slope = t * (2.0 * std::sinh(mid) + 4.0 * eps * std::cosh(mid));
    (slope < y ? lo : hi) = mid;
  }
  const double theta = 0.5 * (lo + hi);
  return std::min(1.0, std::exp(t * biased_log_mgf_rate(eps, theta) - theta * y));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Truncation truncation_cutoff(const EtaProfile& profile, double t, double tol, double eps, long offset) {
  validate_bias(eps);
  if (!(tol > 0 && tol < 1)) throw std::invalid_argument("truncation_cutoff: tol must lie in (0,1)");
  if (!(t >= 0)) throw std::invalid_argument("truncation_cutoff: t must be >= 0");
  if (profile.finite_support()) return {profile.x_max(), 0.0};
  if (!profile.satisfies_growth_condition())
    throw DivergentSum("truncation_cutoff: profile breaks the growth condition; no finite cutoff is certified");
  if (t == 0.0) return {0, 0.0};

  const SkellamLaw* law = eps == 0.0 ? &skellam_law(t) : nullptr;
  auto reach = [&](long k) {
    const long y = offset + 1 + k;
    if (y <= 0) return 1.0;
    if (law) return std::min(1.0, 2.0 * law->G(y));
    return chernoff_reach(t, eps, static_cast<double>(y));
  };
  std::vector<double> terms;
  for (long k = 0;; ++k) {
    const double term = static_cast<double>(profile.eta_at_depth(k)) * reach(k);
    terms.push_back(term);
    // Stop once the terms are negligible and shrinking fast: the rest is dominated by
    // a geometric series with ratio <= 1/2.
    if (k > 2 && term < 1e-30 * tol) {
      const double prev = terms[terms.size() - 2];
      if (term == 0.0 || term <= 0.5 * prev) break;
    }
    if (k > 100000000L) throw std::runtime_error("truncation_cutoff: tail sum did not converge");
  }
  // Mass beyond the last index is at most terms.back() (ratio <= 1/2).
  const long last = static_cast<long>(terms.size()) - 1;
  double suffix = terms.back();
  long depth = last;
  for (long k = last; k >= 1; --k) {
    if (suffix + terms[static_cast<std::size_t>(k)] > tol) break;
    suffix += terms[static_cast<std::size_t>(k)];
    depth = k - 1;
  }
  return {depth, suffix};
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::jump: return "jump";
    case EventKind::front: return "front";
    case EventKind::activate: return "activate";
  }
  return "?";
}

// ---------------------------------------------------------------------------

long SimulationTrace::front_at(double t) const {
  if (t < 0 || t > horizon) throw std::out_of_range("front_at: t outside [0, horizon]");
  auto it = std::upper_bound(front_path.begin(), front_path.end(), t,
                             [](double v, const std::pair<double, long>& p) { return v < p.first; });
  return std::prev(it)->second;
}

ParticleConfiguration SimulationTrace::config_at(double t) const {
  if (t < 0 || t > horizon) throw std::out_of_range("config_at: t outside [0, horizon]");
  if (walk_paths.empty()) throw std::logic_error("config_at: walk paths were not recorded");
  ParticleConfiguration w;
  w.front = front_at(t);
  w.a = initial.a;
  for (const auto& [b, path] : walk_paths) {
    if (path.times.front() > t) continue;
    auto it = std::upper_bound(path.times.begin(), path.times.end(), t);
    w.particles[b] = path.positions[static_cast<std::size_t>(std::distance(path.times.begin(), it)) - 1];
  }
  if (initial.extension && truncated_input) {
    w.extension = initial.extension;
    w.extension->below = initial.extension->origin - truncation.depth;
  } else if (initial.extension) {
    w.extension = initial.extension;
  }
  return w;
}

std::string SimulationTrace::events_csv() const {
  std::string out = "event_index,time,kind,site,particle,position\n";
  for (const auto& e : events) {
    out += std::to_string(e.index) + "," + fmt(e.time) + "," + to_string(e.kind) + "," + std::to_string(e.site) +
           "," + std::to_string(e.particle) + "," + std::to_string(e.position) + "\n";
  }
  return out;
}

std::string SimulationTrace::front_csv() const {
  std::string out = "sigma_n,r\n";
  for (const auto& [s, r] : front_path) out += fmt(s) + "," + std::to_string(r) + "\n";
  return out;
}

// ---------------------------------------------------------------------------

Simulation::Simulation(const ParticleConfiguration& w, const RandomField& field, SimulationOptions options)
    : field_(&field), options_(std::move(options)), a_(w.a), front_(w.front) {
  validate_bias(options_.eps);
  w.validate();
  trace_.eps = options_.eps;
  trace_.initial = w;
  trace_.front_path.push_back({0.0, front_});

  ParticleConfiguration start = w;
  if (!w.is_finite()) {
    if (!options_.tol || !options_.truncation_horizon)
      throw std::invalid_argument("simulation of an infinite configuration needs a tolerance and a horizon");
    const LeftExtension& ext = *w.extension;
    trace_.truncation = truncation_cutoff(ext.profile, *options_.truncation_horizon, *options_.tol, options_.eps,
                                          w.front - ext.origin);
    trace_.truncated_input = true;
    start = w.materialized(ext.origin - trace_.truncation.depth);
    remainder_ = start.extension;
  } else if (w.extension) {
    start = w.materialized(w.extension->origin - w.extension->profile.x_max());
  }
  for (const auto& [b, pos] : start.particles) add_walk(b, pos, 0.0);
  for (std::uint32_t i = 0; i < walks_.size(); ++i) schedule(i);
}

void Simulation::add_walk(Birthplace b, long position, double birth_time) {
  WalkState s;
  s.birth = b;
  s.position = position;
  s.birth_time = birth_time;
  walks_.push_back(s);
  streams_.push_back(options_.stream_for ? options_.stream_for(b) : Stream::base());
  if (options_.record_walk_paths) {
    Trajectory& path = trace_.walk_paths[b];
    path.times = {birth_time};
    path.positions = {position};
  }
}

void Simulation::schedule(std::uint32_t w) {
  WalkState& s = walks_[w];
  const WalkDraw d = field_->walk_draw(s.birth, s.steps + 1, streams_[w]);
  s.next_elapsed = s.elapsed + d.clock;
  s.next_sign = step_sign_unchecked(d.step_unif, options_.eps);
  queue_.push({s.birth_time + s.next_elapsed, s.birth.site, s.birth.index, w});
}

void Simulation::activate_site(long site, double when) {
  trace_.activations[site] = when;
  for (int i = 1; i <= a_; ++i) {
    add_walk({site, i}, site, when);
    if (options_.record_events)
      trace_.events.push_back({trace_.events.size(), when, EventKind::activate, site, i, site});
    schedule(static_cast<std::uint32_t>(walks_.size() - 1));
  }
}

double Simulation::next_event_time() const {
  return queue_.empty() ? std::numeric_limits<double>::infinity() : queue_.top().time;
}

std::optional<StepResult> Simulation::step() {
  if (queue_.empty()) return std::nullopt;
  if (events_ >= options_.event_cap) {
    trace_.cap_reached = true;
    return std::nullopt;
  }
  const Pending next = queue_.top();
  queue_.pop();
  WalkState& s = walks_[next.walk];
  const long from = s.position;
  s.position += s.next_sign;
  s.elapsed = s.next_elapsed;
  ++s.steps;
  time_ = next.time;
  ++events_;
  if (options_.record_walk_paths) {
    Trajectory& path = trace_.walk_paths[s.birth];
    path.times.push_back(time_);
    path.positions.push_back(s.position);
  }
  if (options_.record_events)
    trace_.events.push_back({trace_.events.size(), time_, EventKind::jump, s.birth.site, s.birth.index, s.position});
  const StepResult result{time_, next.walk, from, walks_[next.walk].position, walks_[next.walk].position == front_ + 1};
  if (result.front_advanced) {
    ++front_;
    trace_.front_path.push_back({time_, front_});
    if (options_.record_events)
      trace_.events.push_back({trace_.events.size(), time_, EventKind::front, front_, 0, front_});
    activate_site(front_, time_);
  }
  schedule(static_cast<std::uint32_t>(next.walk));
  trace_.horizon = time_;
  return result;
}

void Simulation::advance_to(double t) {
  while (next_event_time() <= t) {
    if (!step()) break;
  }
  if (!trace_.cap_reached) time_ = std::max(time_, t);
  trace_.horizon = time_;
}

std::optional<double> Simulation::advance_until_front(long site, double guard) {
  if (front_ >= site) {
    const auto it = trace_.activations.find(site);
    return it == trace_.activations.end() ? 0.0 : it->second;
  }
  while (front_ < site) {
    if (next_event_time() > guard) return std::nullopt;
    if (!step()) return std::nullopt;
  }
  return time_;
}

ParticleConfiguration Simulation::snapshot() const {
  ParticleConfiguration w;
  w.front = front_;
  w.a = a_;
  for (const auto& s : walks_) w.particles[s.birth] = s.position;
  w.extension = remainder_;
  return w;
}

SimulationTrace Simulation::take_trace() && {
  trace_.horizon = time_;
  return std::move(trace_);
}

// ---------------------------------------------------------------------------

SimulationTrace run(const ParticleConfiguration& w, double t_max, const RandomField& field,
                    SimulationOptions options) {
  if (!(t_max >= 0)) throw std::invalid_argument("run: t_max must be >= 0");
  if (!options.truncation_horizon) options.truncation_horizon = t_max;
  Simulation sim(w, field, options);
  sim.advance_to(t_max);
  SimulationTrace trace = std::move(sim).take_trace();
  trace.horizon = t_max;
  return trace;
}

std::vector<SimulationTrace> coupled_run(const ParticleConfiguration& w, const std::vector<double>& eps_list,
                                         double t_max, const RandomField& field, SimulationOptions options) {
  if (!std::is_sorted(eps_list.begin(), eps_list.end()))
    throw std::invalid_argument("coupled_run: eps list must be ascending");
  std::vector<SimulationTrace> traces;
  for (double eps : eps_list) {
    options.eps = eps;
    traces.push_back(run(w, t_max, field, options));
  }
  return traces;
}

}  // namespace frontprop
