#include "frontprop/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "frontprop/analytics.hpp"
#include "frontprop/hitting.hpp"

namespace frontprop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no infinities; they are written as strings so the payload stays lossless.
nlohmann::ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

}  // namespace

// Reports ---------------------------------------------------------------------

std::string DataTable::csv() const {
  std::vector<bool> as_log(header.size(), false);
  for (std::size_t c : probability_columns) {
    if (c >= header.size()) continue;
    for (const auto& row : rows)
      if (c < row.size() && row[c] > 0 && std::fabs(std::log10(row[c])) > 6) as_log[c] = true;
  }
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out += ",";
    out += as_log[c] ? "log10_" + header[c] : header[c];
  }
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ",";
      const double v = row[c];
      out += (c < as_log.size() && as_log[c]) ? fmt(v > 0 ? std::log10(v) : -kInf) : fmt(v);
    }
    out += "\n";
  }
  return out;
}

void ExperimentReport::add(const std::string& name, const Estimate& e) {
  estimates.push_back({name, e.value, e.lo, e.hi, e.n, false});
}

void ExperimentReport::add(const std::string& name, const LogProbability& p) {
  estimates.push_back({name, p.value, p.lo, p.hi, p.n, p.censored});
}

void ExperimentReport::add(const std::string& name, const Proportion& p) {
  estimates.push_back({name, p.p, p.lo, p.hi, p.n, false});
}

void ExperimentReport::add_value(const std::string& name, double value, std::size_t n) {
  estimates.push_back({name, value, value, value, n, false});
}

void ExperimentReport::add(const std::string& name, const LinearFit& f) {
  fits.push_back({name, f.slope, f.intercept, f.r2, f.rss, f.n});
}

void ExperimentReport::verdict(const std::string& criterion, bool pass, const std::string& detail) {
  verdicts.push_back({criterion, pass, detail});
}

bool ExperimentReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::string ExperimentReport::json() const {
  nlohmann::ordered_json j;
  j["experiment"] = id;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  auto& est = j["estimates"] = nlohmann::ordered_json::array();
  for (const auto& e : estimates)
    est.push_back({{"name", e.name}, {"value", num(e.value)}, {"ci_lo", num(e.lo)}, {"ci_hi", num(e.hi)},
                   {"n", e.n}, {"censored", e.censored}});
  auto& fi = j["fits"] = nlohmann::ordered_json::array();
  for (const auto& f : fits)
    fi.push_back({{"name", f.name}, {"slope", num(f.slope)}, {"intercept", num(f.intercept)}, {"r2", num(f.r2)},
                  {"residual_ss", num(f.rss)}, {"n", f.n}});
  auto& ve = j["verdicts"] = nlohmann::ordered_json::array();
  for (const auto& v : verdicts) ve.push_back({{"criterion", v.criterion}, {"pass", v.pass}, {"detail", v.detail}});
  j["notes"] = notes;
  auto& tb = j["tables"] = nlohmann::ordered_json::array();
  for (const auto& t : tables) tb.push_back(t.name + ".csv");
  return j.dump(2) + "\n";
}

std::string ExperimentReport::sidecar() const {
  nlohmann::ordered_json j;
  j["experiment"] = id;
  j["config_hash"] = config_hash;
  j["runtime_seconds"] = runtime_seconds;
  j["threads"] = std::max(1u, std::thread::hardware_concurrency());
  return j.dump(2) + "\n";
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Speed ----------------------------------------------------------------------

namespace {

SimulationOptions infinite_options(double eps, double horizon, double tol, std::uint64_t cap = 100000000ULL) {
  SimulationOptions o;
  o.eps = eps;
  o.tol = tol;
  o.truncation_horizon = horizon;
  o.event_cap = cap;
  return o;
}

}  // namespace

SpeedEstimate estimate_speed(const ParticleConfiguration& w, double eps, double t, int replicas, std::uint64_t seed,
                             const SpeedOptions& options) {
  if (!(t > 0)) throw std::invalid_argument("estimate_speed: t must be positive");
  if (replicas < 2) throw std::invalid_argument("estimate_speed: need >= 2 replicas");
  const auto runs = replicate<std::optional<double>>(static_cast<std::size_t>(replicas), [&](std::size_t i) {
    RandomField field(replica_seed(seed, i));
    Simulation sim(w, field, infinite_options(eps, t, options.tol, options.event_cap));
    sim.advance_to(t);
    if (sim.cap_reached()) return std::optional<double>{};
    return std::optional<double>(static_cast<double>(sim.front() - w.front) / t);
  });
  std::vector<double> xs;
  for (const auto& r : runs)
    if (r) xs.push_back(*r);
  if (xs.size() < 2) throw std::runtime_error("estimate_speed: event cap stopped almost every replica");
  return {t, mean_estimate(xs), runs.size() - xs.size()};
}

std::vector<SpeedEstimate> speed_curve(const ParticleConfiguration& w, double eps, const std::vector<double>& t_grid,
                                       int replicas, std::uint64_t seed, const SpeedOptions& options) {
  std::vector<SpeedEstimate> out;
  for (double t : t_grid) out.push_back(estimate_speed(w, eps, t, replicas, seed, options));
  return out;
}

Estimate free_walk_drift(double eps, double t, int replicas, std::uint64_t seed) {
  validate_bias(eps);
  const auto xs = replicate<double>(static_cast<std::size_t>(replicas), [&](std::size_t i) {
    RandomField field(replica_seed(seed, i));
    const Trajectory path = walk_path(field, {0, 1}, eps, {std::nullopt, t});
    return static_cast<double>(path.positions.back()) / t;
  });
  return mean_estimate(xs);
}

// Hitting times and rate functions -------------------------------------------

std::vector<double> hitting_samples(const ParticleConfiguration& w, long n, double eps, double guard, int replicas,
                                    std::uint64_t seed, double tol) {
  if (n < 1) throw std::invalid_argument("hitting_samples: n must be >= 1");
  return replicate<double>(static_cast<std::size_t>(replicas), [&](std::size_t i) {
    RandomField field(replica_seed(seed, i));
    Simulation sim(w, field, infinite_options(eps, guard, tol));
    const auto t = sim.advance_until_front(w.front + n, guard);
    return t ? *t : kInf;
  });
}

LogProbability u_hat(const std::vector<double>& T_n, long n, double b) {
  const double level = b * static_cast<double>(n);
  const auto k = static_cast<std::size_t>(std::count_if(T_n.begin(), T_n.end(), [&](double x) { return x <= level; }));
  return log_frequency(k, T_n.size());
}

std::vector<RatePoint> rate_curve(const std::vector<double>& T_n, long n, const std::vector<double>& b_grid) {
  if (T_n.empty()) throw std::invalid_argument("rate_curve: no samples");
  std::vector<RatePoint> out;
  const double nn = static_cast<double>(n);
  const double N = static_cast<double>(T_n.size());
  for (double b : b_grid) {
    if (!(b > 0)) throw std::invalid_argument("rate_curve: speed levels must be positive");
    RatePoint p{b, n, u_hat(T_n, n, 1.0 / b), 0, 0, 0};
    const double s = b / nn;
    if (p.logp.censored) {
      p.I = -s * p.logp.value;  // rule of three: a lower bound on I
      p.I_lo = p.I;
      p.I_hi = kInf;
    } else if (p.logp.successes == T_n.size()) {
      p.I = 0.0;
      p.I_lo = 0.0;
      p.I_hi = -s * std::log1p(-std::min(1.0, 3.0 / N));
    } else {
      p.I = -s * p.logp.value;
      p.I_lo = -s * p.logp.hi;
      p.I_hi = -s * p.logp.lo;
    }
    out.push_back(p);
  }
  return out;
}

SuperadditivityCheck superadditivity_check(const std::vector<double>& T_n, long n, double b,
                                           const std::vector<double>& T_m, long m, double c,
                                           const std::vector<double>& T_nm) {
  const double level = (b * static_cast<double>(n) + c * static_cast<double>(m)) / static_cast<double>(n + m);
  const LogProbability l = u_hat(T_nm, n + m, level);
  const LogProbability r1 = u_hat(T_n, n, b);
  const LogProbability r2 = u_hat(T_m, m, c);
  SuperadditivityCheck out;
  out.lhs = l.value;
  out.rhs = r1.value + r2.value;
  const double se = std::sqrt(l.std_error * l.std_error + r1.std_error * r1.std_error + r2.std_error * r2.std_error);
  out.slack = 2.0 * 1.96 * se;
  out.holds = !l.censored && !r1.censored && !r2.censored ? out.lhs >= out.rhs - out.slack : true;
  return out;
}

// Kingman -------------------------------------------------------------------

KingmanResult kingman_check(int a, const std::vector<long>& m_grid, int replicas, std::uint64_t seed, double tol) {
  if (m_grid.size() < 2 || !std::is_sorted(m_grid.begin(), m_grid.end()) || m_grid.front() < 1)
    throw std::invalid_argument("kingman_check: need an increasing grid of >= 2 positive sites");
  const double guard = 4.0 * static_cast<double>(m_grid.back()) + 100.0;
  const ParticleConfiguration w = ParticleConfiguration::I(0, a);
  const auto runs = replicate<std::vector<double>>(static_cast<std::size_t>(replicas), [&](std::size_t i) {
    RandomField field(replica_seed(seed, i));
    Simulation sim(w, field, infinite_options(0.0, guard, tol));
    std::vector<double> ts;
    for (long m : m_grid) {
      const auto t = sim.advance_until_front(m, guard);
      if (!t) return std::vector<double>{};
      ts.push_back(*t);
    }
    return ts;
  });
  KingmanResult out;
  out.m_grid = m_grid;
  out.unreached = 0;
  std::vector<std::vector<double>> cols(m_grid.size());
  std::vector<double> intercepts;
  std::vector<double> inv_m;
  for (long m : m_grid) inv_m.push_back(1.0 / static_cast<double>(m));
  for (const auto& ts : runs) {
    if (ts.empty()) {
      ++out.unreached;
      continue;
    }
    std::vector<double> ys;
    for (std::size_t k = 0; k < m_grid.size(); ++k) {
      ys.push_back(ts[k] / static_cast<double>(m_grid[k]));
      cols[k].push_back(ys.back());
    }
    // The intercept is linear in the data, so per-replica fits give an honest CI.
    intercepts.push_back(linear_fit(inv_m, ys).intercept);
  }
  if (intercepts.size() < 2) throw std::runtime_error("kingman_check: guard passed on almost every replica");
  std::vector<double> means;
  for (const auto& c : cols) {
    out.per_site.push_back(mean_estimate(c));
    means.push_back(out.per_site.back().value);
  }
  out.extrapolation = linear_fit(inv_m, means);
  out.limit = mean_estimate(intercepts);
  return out;
}

// Slowdown ---------------------------------------------------------------------

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0 && hi > lo) || points < 2) throw std::invalid_argument("log_grid: need 0 < lo < hi and >= 2 points");
  std::vector<double> g;
  for (int i = 0; i < points; ++i)
    g.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1)));
  return g;
}

SlowdownScaling slowdown_scaling(const EtaProfile& profile, const std::vector<double>& t_grid, double tol) {
  if (t_grid.size() < 2) throw std::invalid_argument("slowdown_scaling: need >= 2 times");
  SlowdownScaling out;
  out.t_grid = t_grid;
  std::vector<double> x, y;
  for (double t : t_grid) {
    const SlowdownProduct sp = slowdown_product(profile, t, tol);
    out.log_probability.push_back(sp.log_probability);
    if (!(sp.log_probability < 0)) throw std::runtime_error("slowdown_scaling: P(r_t = 0) rounds to 1");
    x.push_back(std::log(t));
    y.push_back(std::log(-sp.log_probability));
  }
  out.fit = linear_fit(x, y);
  const std::size_t n = x.size();
  out.tail_slope = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
  return out;
}

// Slowdown window events --------------------------------------------------------

double WindowEventParams::gamma() const { return b - (1 - alpha) * (1 + delta) * v; }

void WindowEventParams::derive() {
  if (!(c >= 0 && c < b && b < v))
    throw std::invalid_argument("window events: need 0 <= c < b < v");
  const double mid = 0.5 * (b + c);
  if (alpha == 0.0) alpha = 1.0 - mid / v;
  if (delta == 0.0) {
    const double centre = (1 - alpha) * v;
    delta = 0.5 * std::min(b / centre - 1.0, 1.0 - c / centre);
  }
  validate();
}

void WindowEventParams::validate() const {
  if (!(alpha > 0 && alpha < 1 && delta > 0 && delta < 1))
    throw std::invalid_argument("window events: alpha and delta must lie in (0,1)");
  const double lo = (1 - alpha) * (1 - delta) * v;
  const double hi = (1 - alpha) * (1 + delta) * v;
  if (!(c < lo && hi < b)) throw std::invalid_argument("window events: need c < (1-a)(1-d)v < (1-a)(1+d)v < b");
}

WindowEventSample window_event_sample(const ParticleConfiguration& w, const WindowEventParams& params, double t,
                                      const RandomField& field, double tol) {
  params.validate();
  const double s1 = (1 - params.alpha) * t;
  const double eps = 0.0;
  Simulation sim(w, field, infinite_options(eps, t, tol));
  sim.advance_to(s1);
  const long r0 = w.front;
  const long r1 = sim.front();
  WindowEventSample out{};
  const double rel1 = static_cast<double>(r1 - r0);
  out.B = params.v * s1 * (1 - params.delta) <= rel1 && rel1 <= params.v * s1 * (1 + params.delta);

  const std::size_t alive = sim.walks().size();
  const double ceiling = static_cast<double>(r1) + params.gamma() * t;
  out.C = true;
  while (sim.next_event_time() <= t) {
    const auto st = sim.step();
    if (!st) throw std::runtime_error("window events: event cap reached");
    if (st->walk < alive && static_cast<double>(st->to) > ceiling) out.C = false;
  }
  sim.advance_to(t);
  const double rt = static_cast<double>(sim.front() - r0);
  out.target = params.c * t <= rt && rt <= params.b * t;

  const long top = r0 + static_cast<long>(std::floor(params.b * t));
  const double limit = t - s1;
  out.D = true;
  for (long x = r1 + 1; x <= top && out.D; ++x)
    for (int i = 1; i <= w.a && out.D; ++i) {
      WalkLadder ladder(field, {x, i}, eps, x, Stream::base());
      if (ladder.reach_within(top + 1, limit)) out.D = false;
    }
  return out;
}

std::vector<WindowEventRates> slowdown_window_experiment(const ParticleConfiguration& w, WindowEventParams params,
                                               const std::vector<double>& t_grid, int replicas, std::uint64_t seed,
                                               double tol) {
  params.derive();
  std::vector<WindowEventRates> out;
  for (double t : t_grid) {
    const auto samples = replicate<WindowEventSample>(static_cast<std::size_t>(replicas), [&](std::size_t i) {
      RandomField field(replica_seed(seed, i));
      return window_event_sample(w, params, t, field, tol);
    });
    std::size_t nb = 0, nc = 0, nd = 0, nbcd = 0, nt = 0, bad = 0;
    for (const auto& s : samples) {
      nb += s.B;
      nc += s.C;
      nd += s.D;
      nbcd += s.B && s.C && s.D;
      nt += s.target;
      bad += !s.inclusion_holds();
    }
    const std::size_t n = samples.size();
    out.push_back({t, wilson(nb, n), wilson(nc, n), wilson(nd, n), wilson(nbcd, n), wilson(nt, n), bad});
  }
  return out;
}

// Square-root tails --------------------------------------------------------------

double SqrtTailLaw::tail(double x) const {
  if (x <= 0) return 1.0;
  return std::min(1.0, A * std::exp(-c * std::sqrt(x)));
}

double SqrtTailLaw::mean() const {
  // Tail is 1 up to x0 = (log A / c)^2, then A exp(-c sqrt x):
  // int_{x0}^inf A e^{-c sqrt x} dx = 2A e^{-c s0} (s0/c + 1/c^2), s0 = sqrt x0.
  const double s0 = A > 1 ? std::log(A) / c : 0.0;
  return s0 * s0 + 2.0 * A * std::exp(-c * s0) * (s0 / c + 1.0 / (c * c));
}

double SqrtTailLaw::sample(double u) const {
  if (u >= A) return 0.0;
  const double s = std::log(A / u) / c;
  return s * s;
}

SqrtTailExperiment sqrt_tail_ld_experiment(const SqrtTailLaw& law, double f, const std::vector<long>& n_grid,
                                           int replicas, std::uint64_t seed) {
  if (!(law.A > 0 && law.c > 0)) throw std::invalid_argument("sqrt tail law: A and c must be positive");
  SqrtTailExperiment out;
  out.single_draw_exact = law.tail(f);
  out.precondition_ok = f > law.mean();
  constexpr std::uint32_t kTag = 7;
  RandomField field(seed);
  for (long n : n_grid) {
    if (n < 1) throw std::invalid_argument("sqrt tail experiment: n must be >= 1");
    const auto hits = replicate<int>(static_cast<std::size_t>(replicas), [&](std::size_t i) {
      double s = 0.0;
      for (long k = 0; k < n; ++k)
        s += law.sample(field.auxiliary_uniform(kTag, i, static_cast<std::uint64_t>(n) << 32 | static_cast<std::uint64_t>(k)));
      return s / static_cast<double>(n) >= f ? 1 : 0;
    });
    std::size_t k = 0;
    for (int h : hits) k += static_cast<std::size_t>(h);
    out.points.push_back({n, log_frequency(k, hits.size())});
  }
  if (!out.precondition_ok) {
    out.verdict = "precondition violated: f is not above the mean";
    return out;
  }
  std::vector<double> x, y;
  for (const auto& p : out.points)
    if (!p.logp.censored) {
      x.push_back(std::sqrt(static_cast<double>(p.n)));
      y.push_back(p.logp.value);
    }
  if (x.size() < 3) {
    out.verdict = "too few uncensored points to fit";
    return out;
  }
  out.fit = linear_fit(x, y);
  out.verdict = out.fit->slope < 0 ? "decreasing in sqrt(n)" : "not decreasing";
  return out;
}

// Regenerations ---------------------------------------------------------------------

RenewalExperiment renewal_experiment(const ParticleConfiguration& w, double eps, const RenewalParams& params,
                                     int replicas, int count, double horizon, double censor_T, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("renewal_experiment: count must be >= 1");
  const auto chains = replicate<std::vector<RenewalRecord>>(static_cast<std::size_t>(replicas), [&](std::size_t i) {
    RandomField field(replica_seed(seed, i));
    return regeneration_chain(w, eps, params, field, count, horizon, censor_T);
  });
  RenewalExperiment out;
  out.dkappa_by_index.resize(static_cast<std::size_t>(std::max(0, count - 1)));
  double num = 0, den = 0;
  std::vector<std::pair<double, double>> pairs;
  std::vector<double> all_dk;
  for (const auto& chain : chains) {
    std::vector<double> dks;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      ++out.records;
      const RenewalRecord& rec = chain[k];
      if (rec.censored) {
        ++out.censored_records;
        break;
      }
      out.attempts.push_back(*rec.K);
      if (k == 0) {
        out.first_kappa.push_back(*rec.kappa - rec.start_time);
        continue;
      }
      const RenewalRecord& prev = chain[k - 1];
      const double dk = *rec.kappa - *prev.kappa;
      out.increments.push_back({dk, static_cast<double>(*rec.r_kappa - *prev.r_kappa)});
      out.dkappa_by_index[k - 1].push_back(dk);
      dks.push_back(dk);
      all_dk.push_back(dk);
    }
    for (std::size_t k = 0; k + 1 < dks.size(); ++k) pairs.push_back({dks[k], dks[k + 1]});
  }
  if (!out.increments.empty()) {
    try {
      out.speed = renewal_speed(out.increments, out.censored_records, 2);
    } catch (const std::invalid_argument&) {
    }
  }
  if (!pairs.empty() && all_dk.size() > 2) {
    double m = 0;
    for (double x : all_dk) m += x;
    m /= static_cast<double>(all_dk.size());
    double var = 0;
    for (double x : all_dk) var += (x - m) * (x - m);
    var /= static_cast<double>(all_dk.size());
    for (const auto& [x, y] : pairs) num += (x - m) * (y - m);
    den = var * static_cast<double>(pairs.size());
    out.lag1 = den > 0 ? num / den : 0.0;
    out.lag1_pairs = pairs.size();
  }
  if (out.dkappa_by_index.size() >= 2 && !out.dkappa_by_index[0].empty() && !out.dkappa_by_index[1].empty())
    out.ks = ks_two_sample(out.dkappa_by_index[0], out.dkappa_by_index[1]);
  return out;
}

SurvivalFits survival_fits(std::vector<double> samples, double q_lo, double q_hi, int points) {
  if (samples.size() < 10) throw std::invalid_argument("survival_fits: need >= 10 samples");
  if (!(0 <= q_lo && q_lo < q_hi && q_hi < 1) || points < 3)
    throw std::invalid_argument("survival_fits: bad quantile range");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  SurvivalFits out;
  std::vector<double> lk, ls;
  for (int j = 0; j < points; ++j) {
    const double q = q_lo + (q_hi - q_lo) * j / (points - 1);
    const double k = samples[static_cast<std::size_t>(std::floor(q * (n - 1)))];
    if (!out.k.empty() && k <= out.k.back()) continue;
    const auto above = static_cast<double>(samples.end() - std::upper_bound(samples.begin(), samples.end(), k));
    if (above == 0 || !(k > 0)) continue;
    out.k.push_back(k);
    out.survival.push_back(above / n);
    lk.push_back(std::log(k));
    ls.push_back(std::log(above / n));
  }
  if (out.k.size() < 3) throw std::invalid_argument("survival_fits: too few distinct tail points");
  out.exponential = linear_fit(out.k, ls);
  out.power = linear_fit(lk, ls);
  out.aic_exponential = least_squares_aic(out.exponential.rss, out.k.size(), 2);
  out.aic_power = least_squares_aic(out.power.rss, out.k.size(), 2);
  return out;
}

// Coupling and truncation ---------------------------------------------------------

CouplingCheck coupling_check(const ParticleConfiguration& w, const std::vector<double>& eps_list, double t,
                             int seeds, std::uint64_t seed) {
  if (eps_list.size() < 2) throw std::invalid_argument("coupling_check: need >= 2 biases");
  struct One {
    bool front_ok = true;
    bool hitting_ok = true;
  };
  const auto res = replicate<One>(static_cast<std::size_t>(seeds), [&](std::size_t i) {
    RandomField field(replica_seed(seed, i));
    SimulationOptions o;
    o.tol = 1e-9;
    const auto traces = coupled_run(w, eps_list, t, field, o);
    One r;
    for (std::size_t k = 0; k + 1 < traces.size(); ++k) {
      const auto& lo = traces[k];
      const auto& hi = traces[k + 1];
      for (const auto* tr : {&lo, &hi})
        for (const auto& [s, front] : tr->front_path)
          if (lo.front_at(s) > hi.front_at(s)) r.front_ok = false;
      // Every site reached by the slower bias is reached no later by the faster one.
      for (std::size_t u = 1; u < lo.front_path.size(); ++u) {
        if (u >= hi.front_path.size() || hi.front_path[u].first > lo.front_path[u].first) r.hitting_ok = false;
      }
    }
    return r;
  });
  CouplingCheck out;
  out.samples = res.size();
  for (const auto& r : res) {
    out.front_violations += !r.front_ok;
    out.hitting_violations += !r.hitting_ok;
  }
  return out;
}

TruncationCheck truncation_check(int a, double t, double tol, int seeds, std::uint64_t seed) {
  TruncationCheck out;
  out.tol = tol;
  out.K = truncation_cutoff(EtaProfile::constant(a), t, tol).depth;
  const ParticleConfiguration I0 = ParticleConfiguration::I(0, a);
  const ParticleConfiguration near = I0.materialized(-out.K).truncated();
  const ParticleConfiguration far = I0.materialized(-2 * out.K).truncated();
  const auto same = replicate<int>(static_cast<std::size_t>(seeds), [&](std::size_t i) {
    RandomField field(replica_seed(seed, i));
    const SimulationTrace x = run(near, t, field);
    const SimulationTrace y = run(far, t, field);
    return x.front_path == y.front_path ? 1 : 0;
  });
  out.samples = same.size();
  for (int s : same) out.identical += static_cast<std::size_t>(s);
  return out;
}

}  // namespace frontprop
