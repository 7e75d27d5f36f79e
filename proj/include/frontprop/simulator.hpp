#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "frontprop/configuration.hpp"
#include "frontprop/randomness.hpp"

namespace frontprop {

struct Truncation {
  long depth = 0;           // deepest kept site sits at origin - depth
  double bound = 0.0;       // P(some dropped walk reaches the front) <= bound
};

/// Cutoff for a profile anchored at the front (r = 0): walks born at x <= -depth-1 are
/// dropped, and the bound certifies that with probability >= 1 - bound none of them
/// reaches site 1 before t. With eps = 0 the bound is sum eta(x) 2 G_t(1-x); with
/// eps > 0 a Chernoff bound exp(t lambda(theta) - theta y) optimized per distance y.
/// `offset` shifts all distances (profile origin sitting `offset` sites below the front).
/// Throws DivergentSum when the profile breaks the growth condition.
Truncation truncation_cutoff(const EtaProfile& profile, double t, double tol, double eps = 0.0, long offset = 0);

enum class EventKind { jump, front, activate };
const char* to_string(EventKind kind);

struct EventRecord {
  std::uint64_t index;
  double time;
  EventKind kind;
  long site;
  int particle;
  long position;
};

/// One walk of the running process. Its n-th jump happens at birth_time + elapsed_n
/// with elapsed_n the running sum of its own clocks.
struct WalkState {
  Birthplace birth;
  long position;
  double birth_time;
  double elapsed = 0.0;
  std::uint64_t steps = 0;
  double next_elapsed = 0.0;
  int next_sign = 0;
};

struct SimulationOptions {
  double eps = 0.0;
  std::optional<double> tol;                 // required for infinite configurations
  std::optional<double> truncation_horizon;  // time up to which the cutoff is certified
  std::uint64_t event_cap = 100000000ULL;
  bool record_walk_paths = false;
  bool record_events = false;
  /// Stream driving each walk; defaults to the base family.
  std::function<Stream(Birthplace)> stream_for;
};

struct SimulationTrace {
  double eps = 0.0;
  double horizon = 0.0;
  std::vector<std::pair<double, long>> front_path;  // (sigma_n, r_{sigma_n}); first entry (0, r_0)
  std::map<long, double> activations;               // site -> activation time
  std::map<Birthplace, Trajectory> walk_paths;      // absolute times and positions
  std::vector<EventRecord> events;
  Truncation truncation;
  bool truncated_input = false;
  bool cap_reached = false;
  ParticleConfiguration initial;

  long front_at(double t) const;
  /// Requires recorded walk paths.
  ParticleConfiguration config_at(double t) const;

  std::string events_csv() const;
  std::string front_csv() const;
};

/// Outcome of one processed jump.
struct StepResult {
  double time;
  std::size_t walk;
  long from;
  long to;
  bool front_advanced;
};

/// Steppable event-driven simulation of (F_t, r_t, A_t). Copyable, so callers can
/// checkpoint and rewind.
class Simulation {
 public:
  Simulation(const ParticleConfiguration& w, const RandomField& field, SimulationOptions options = {});

  double time() const { return time_; }
  long front() const { return front_; }
  std::uint64_t events() const { return events_; }
  bool cap_reached() const { return trace_.cap_reached; }
  double eps() const { return options_.eps; }
  int a() const { return a_; }

  const std::vector<WalkState>& walks() const { return walks_; }
  const SimulationTrace& trace() const { return trace_; }
  SimulationTrace take_trace() &&;

  /// Time of the next pending jump (infinity when nothing can move).
  double next_event_time() const;
  /// Processes the next jump. nullopt when the event cap is hit.
  std::optional<StepResult> step();
  /// Processes every jump at time <= t, then sets the clock to t.
  void advance_to(double t);
  /// Runs until the front reaches `site` or the next jump would pass `guard`.
  std::optional<double> advance_until_front(long site, double guard);

  /// Current configuration (positions of all walks, plus any untouched extension).
  ParticleConfiguration snapshot() const;
  /// Unmaterialized left remainder of an infinite start (untouched particles).
  const std::optional<LeftExtension>& snapshot_extension() const { return remainder_; }

 private:
  struct Pending {
    double time;
    long site;
    int index;
    std::uint32_t walk;
  };
  struct Later {
    bool operator()(const Pending& x, const Pending& y) const {
      if (x.time != y.time) return x.time > y.time;
      if (x.site != y.site) return x.site > y.site;
      return x.index > y.index;
    }
  };

  void add_walk(Birthplace b, long position, double birth_time);
  void schedule(std::uint32_t w);
  void activate_site(long site, double when);

  const RandomField* field_;
  SimulationOptions options_;
  int a_;
  long front_;
  double time_ = 0.0;
  std::uint64_t events_ = 0;
  std::vector<WalkState> walks_;
  std::vector<Stream> streams_;
  std::priority_queue<Pending, std::vector<Pending>, Later> queue_;
  std::optional<LeftExtension> remainder_;
  SimulationTrace trace_;
};

/// Runs w until t_max and returns the trace.
SimulationTrace run(const ParticleConfiguration& w, double t_max, const RandomField& field,
                    SimulationOptions options = {});

/// Same randomness, one trace per bias; eps_list must be ascending.
std::vector<SimulationTrace> coupled_run(const ParticleConfiguration& w, const std::vector<double>& eps_list,
                                         double t_max, const RandomField& field, SimulationOptions options = {});

}  // namespace frontprop
