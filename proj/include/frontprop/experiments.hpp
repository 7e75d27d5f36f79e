#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frontprop/configuration.hpp"
#include "frontprop/decoupling.hpp"
#include "frontprop/renewal.hpp"
#include "frontprop/simulator.hpp"
#include "frontprop/stats.hpp"

namespace frontprop {

// Reports -------------------------------------------------------------------

struct ReportEstimate {
  std::string name;
  double value;
  double lo;
  double hi;
  std::size_t n;
  bool censored = false;
};

struct ReportFit {
  std::string name;
  double slope;
  double intercept;
  double r2;
  double rss;
  std::size_t n;
};

struct Verdict {
  std::string criterion;
  bool pass;
  std::string detail;
};

/// Two-column (or wider) numeric table, written as CSV.
struct DataTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  /// Columns holding probabilities; written in log10 when |log10 p| > 6.
  std::vector<std::size_t> probability_columns;

  std::string csv() const;
};

struct ExperimentReport {
  std::string id;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<ReportEstimate> estimates;
  std::vector<ReportFit> fits;
  std::vector<Verdict> verdicts;
  std::vector<DataTable> tables;
  std::vector<std::string> notes;
  double runtime_seconds = 0.0;  // kept out of the payload, see sidecar()

  void add(const std::string& name, const Estimate& e);
  void add(const std::string& name, const LogProbability& p);
  void add(const std::string& name, const Proportion& p);
  void add_value(const std::string& name, double value, std::size_t n = 0);
  void add(const std::string& name, const LinearFit& f);
  void verdict(const std::string& criterion, bool pass, const std::string& detail = "");
  bool passed() const;

  /// Deterministic payload (no timing).
  std::string json() const;
  /// Timing and other run-dependent data.
  std::string sidecar() const;
};

/// FNV-1a over the text, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Runs fn(i) for i in [0, count) on worker threads; results come back in index order.
template <class T>
std::vector<T> replicate(std::size_t count, const std::function<T(std::size_t)>& fn);

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

template <class T>
std::vector<T> replicate(std::size_t count, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(count);
  parallel_for(count, [&](std::size_t i) { slots[i].emplace(fn(i)); });
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline std::uint64_t replica_seed(std::uint64_t seed, std::size_t i) { return seed ^ static_cast<std::uint64_t>(i); }

// Speed ----------------------------------------------------------------------

struct SpeedOptions {
  double tol = 1e-9;
  std::uint64_t event_cap = 100000000ULL;
};

struct SpeedEstimate {
  double t;
  Estimate speed;      // mean of r_t / t
  std::size_t capped;  // replicas stopped by the event cap (excluded)
};

/// r_t / t over replicas seeded seed ^ i, all started from w with bias eps.
SpeedEstimate estimate_speed(const ParticleConfiguration& w, double eps, double t, int replicas, std::uint64_t seed,
                             const SpeedOptions& options = {});

/// One estimate per t, each on the same seeds.
std::vector<SpeedEstimate> speed_curve(const ParticleConfiguration& w, double eps, const std::vector<double>& t_grid,
                                       int replicas, std::uint64_t seed, const SpeedOptions& options = {});

/// Position / t of a single biased walk (no reaction), the 4 eps drift check.
Estimate free_walk_drift(double eps, double t, int replicas, std::uint64_t seed);

// Hitting times and rate functions -------------------------------------------

/// T_w(n) per replica; infinity when `guard` passed first.
std::vector<double> hitting_samples(const ParticleConfiguration& w, long n, double eps, double guard, int replicas,
                                    std::uint64_t seed, double tol = 1e-9);

/// u_n(b) = log P(T(n) <= b n) from hitting samples of T(n).
LogProbability u_hat(const std::vector<double>& T_n, long n, double b);

struct RatePoint {
  double b;                // speed level
  long n;
  LogProbability logp;     // log P(T(n) <= n / b)
  double I;                // -(b/n) log p
  double I_lo;
  double I_hi;
};

/// I(b) = b J(1/b) read off samples of T(n): I = -(b/n) log P(T(n) <= n/b). When
/// every sample succeeds the upper end uses the rule of three on failures.
std::vector<RatePoint> rate_curve(const std::vector<double>& T_n, long n, const std::vector<double>& b_grid);

struct SuperadditivityCheck {
  double lhs;      // u_{n+m}((bn + cm)/(n+m))
  double rhs;      // u_n(b) + u_m(c)
  double slack;    // two CI widths
  bool holds;
};

SuperadditivityCheck superadditivity_check(const std::vector<double>& T_n, long n, double b,
                                           const std::vector<double>& T_m, long m, double c,
                                           const std::vector<double>& T_nm);

// Kingman -------------------------------------------------------------------

struct KingmanResult {
  std::vector<long> m_grid;
  std::vector<Estimate> per_site;   // m^{-1} E[T_{I_0}(m)]
  LinearFit extrapolation;          // per_site vs 1/m
  Estimate limit;                   // intercept with its standard error
  std::size_t unreached;            // replicas where the guard passed (excluded)
};

KingmanResult kingman_check(int a, const std::vector<long>& m_grid, int replicas, std::uint64_t seed,
                            double tol = 1e-9);

// Slowdown ---------------------------------------------------------------------

struct SlowdownScaling {
  std::vector<double> t_grid;
  std::vector<double> log_probability;  // log P(r_t = 0)
  LinearFit fit;                        // log(-log P) vs log t
  double tail_slope;                    // slope over the last two grid points
};

SlowdownScaling slowdown_scaling(const EtaProfile& profile, const std::vector<double>& t_grid, double tol = 1e-14);

std::vector<double> log_grid(double lo, double hi, int points);

// Slowdown window events ---------------------------------------------------------

struct WindowEventParams {
  double c = 0.0;
  double b = 0.0;
  double v = 0.0;      // speed estimate used to place B_t
  double alpha = 0.0;  // derived when left at 0
  double delta = 0.0;  // derived when left at 0
  double gamma() const;  // b - (1 - alpha)(1 + delta) v
  void derive();
  void validate() const;
};

struct WindowEventSample {
  bool B;
  bool C;
  bool D;
  bool target;
  bool inclusion_holds() const { return !(B && C && D) || target; }
};

/// Events from one run started at w: B_t (front at (1-alpha)t inside the speed band),
/// C_t (walks alive at (1-alpha)t stay below r_{(1-alpha)t} + gamma t up to t), D_t
/// (no walk born in (r_{(1-alpha)t}, bt] climbs above bt within alpha t of its own
/// clock) and the target {ct <= r_t <= bt}.
WindowEventSample window_event_sample(const ParticleConfiguration& w, const WindowEventParams& params, double t,
                                      const RandomField& field, double tol = 1e-9);

struct WindowEventRates {
  double t;
  Proportion B, C, D, BCD, target;
  std::size_t inclusion_failures;
};

std::vector<WindowEventRates> slowdown_window_experiment(const ParticleConfiguration& w, WindowEventParams params,
                                               const std::vector<double>& t_grid, int replicas, std::uint64_t seed,
                                               double tol = 1e-9);

// Square-root tails --------------------------------------------------------------

/// Law with tail P(X >= x) = min(1, A exp(-c sqrt x)), sampled by inversion.
struct SqrtTailLaw {
  double A = 1.0;
  double c = 1.0;
  double tail(double x) const;
  double mean() const;
  double sample(double u) const;  // u uniform in (0,1)
};

struct SqrtTailPoint {
  long n;
  LogProbability logp;  // log P(mean of n draws >= f)
};

struct SqrtTailExperiment {
  bool precondition_ok;  // f > mean
  std::string verdict;
  std::vector<SqrtTailPoint> points;
  std::optional<LinearFit> fit;  // log P vs sqrt n over uncensored points
  double single_draw_exact = 0.0;
};

SqrtTailExperiment sqrt_tail_ld_experiment(const SqrtTailLaw& law, double f, const std::vector<long>& n_grid,
                                           int replicas, std::uint64_t seed);

// Regenerations ---------------------------------------------------------------------

struct RenewalExperiment {
  std::vector<RenewalIncrement> increments;           // between consecutive regenerations
  std::vector<std::vector<double>> dkappa_by_index;  // [j]: samples of kappa_{j+2} - kappa_{j+1}
  std::vector<double> first_kappa;
  std::vector<int> attempts;                          // K of every uncensored record
  std::size_t records = 0;
  std::size_t censored_records = 0;
  std::optional<RenewalSpeed> speed;
  double lag1 = 0.0;        // pooled over consecutive increments of one replica
  std::size_t lag1_pairs = 0;
  std::optional<KsResult> ks;  // first two increment indices
};

/// `count` successive regenerations per replica, each searched up to `horizon` (absolute).
RenewalExperiment renewal_experiment(const ParticleConfiguration& w, double eps, const RenewalParams& params,
                                     int replicas, int count, double horizon, double censor_T, std::uint64_t seed);

struct SurvivalFits {
  std::vector<double> k;         // evaluation points
  std::vector<double> survival;  // empirical P(X > k)
  LinearFit exponential;         // log S vs k
  LinearFit power;               // log S vs log k
  double aic_exponential;
  double aic_power;
};

/// Upper-tail survival fits on the empirical quantiles q_lo..q_hi.
SurvivalFits survival_fits(std::vector<double> samples, double q_lo = 0.5, double q_hi = 0.98, int points = 13);

// Coupling and truncation ---------------------------------------------------------

struct CouplingCheck {
  std::size_t samples = 0;
  std::size_t front_violations = 0;    // some t with r^{eps_k}_t > r^{eps_{k+1}}_t
  std::size_t hitting_violations = 0;  // some u with T^{eps_k}(u) < T^{eps_{k+1}}(u)
};

CouplingCheck coupling_check(const ParticleConfiguration& w, const std::vector<double>& eps_list, double t,
                             int seeds, std::uint64_t seed);

struct TruncationCheck {
  long K = 0;
  std::size_t samples = 0;
  std::size_t identical = 0;
  double tol = 0.0;
};

/// I_0 run with sources down to -K (the certified cutoff) and down to -2K.
TruncationCheck truncation_check(int a, double t, double tol, int seeds, std::uint64_t seed);

}  // namespace frontprop
