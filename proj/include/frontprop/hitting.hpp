#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "frontprop/configuration.hpp"
#include "frontprop/randomness.hpp"

namespace frontprop {

/// First-passage time of one walk in its own frame. `time` is empty when the target
/// was not reached within `cap` steps; `elapsed_at_cap` then lower-bounds the true time.
struct HitResult {
  std::optional<double> time;
  std::uint64_t steps = 0;
  double elapsed_at_cap = 0.0;
};

HitResult walk_hit(const RandomField& field, Birthplace b, double eps, long start, long target, std::uint64_t cap,
                   Stream stream = Stream::base());

/// Lazily extended record of the first times a walk reaches each level above its start.
class WalkLadder {
 public:
  WalkLadder(const RandomField& field, Birthplace b, double eps, long start, Stream stream);

  /// First time (own frame) the walk reaches `level` > start, walking at most `cap` steps in total.
  std::optional<double> reach(long level, std::uint64_t cap);
  /// Same, but walks only while its own clock stays <= time_limit. Empty exactly when
  /// the first time at `level` exceeds time_limit.
  std::optional<double> reach_within(long level, double time_limit);
  std::uint64_t steps() const { return steps_; }
  double elapsed() const { return elapsed_; }
  Birthplace birth() const { return birth_; }
  long start() const { return start_; }

 private:
  const RandomField* field_;
  Birthplace birth_;
  double eps_;
  long start_;
  Stream stream_;
  long position_;
  double elapsed_ = 0.0;
  std::uint64_t steps_ = 0;
  std::vector<double> ladder_;  // ladder_[h-1]: first time at start + h
};

/// First-link candidate of a chain: an existing walk at `position`, born at `birth_time`.
struct ChainSource {
  Birthplace walk;
  long position;
  double birth_time = 0.0;
  Stream stream = Stream::base();
};

/// Chain infimum over start -> x_2 -> ... -> target with floor < x_2 < ... < target.
/// Intermediate links use walks (x_g, i), i = 1..a, born when the chain reaches x_g.
struct ChainSpec {
  long floor_site;
  long target;
  int a = 1;
  double eps = 0.0;
  std::vector<ChainSource> sources;
  std::uint64_t initial_cap = 4096;
  /// Adaptive mode doubles a walk's cap until no capped walk could beat the result.
  /// With adaptive off, every walk is cut at initial_cap (truncated hitting times).
  bool adaptive = true;
  std::uint64_t max_cap = 1ULL << 26;
};

struct ChainLink {
  Birthplace walk;
  long from;
  long to;
  double arrival;
};

struct ChainResult {
  std::optional<double> time;               // empty: no admissible chain (or all capped)
  std::vector<std::optional<double>> site_times;  // earliest arrival at floor+1..target
  std::vector<ChainLink> chain;             // an optimal chain
  bool certified = true;
};

ChainResult solve_chain(const RandomField& field, const ChainSpec& spec);

/// Largest u - r accepted by chain_oracle.
inline constexpr long kOracleSpan = 8;

/// Chain infimum for a finite configuration by brute force over chains, u - r <= kOracleSpan.
ChainResult chain_oracle(const ParticleConfiguration& w, long u, double eps, const RandomField& field,
                         std::uint64_t cap = 4096);

/// T_w(u) read off an event simulation; nullopt when `guard` passes first.
std::optional<double> simulated_T(const ParticleConfiguration& w, long u, double eps, const RandomField& field,
                                  std::optional<double> tol = std::nullopt, double guard = 1e6);

/// T(u, K): sources born at x >= -K only, every walk limited to K steps.
ChainResult truncated_T(const ParticleConfiguration& w, long u, double eps, const RandomField& field, long K);

struct SubadditivitySample {
  double lhs;   // T_w(v)
  double rhs;   // T_w(u) + T_{w+(u-r)}(v)
  bool holds;
  bool equality;
};

/// T_w(v) <= T_w(u) + T_{w oplus (u-r)}(v) on shared randomness. Requires r < u < v.
SubadditivitySample subadditivity_check(const ParticleConfiguration& w, long u, long v, double eps,
                                        const RandomField& field, std::optional<double> tol = std::nullopt);

struct InclusionSample {
  double t_n;      // T_{delta_0}(n)
  double t_shift;  // T_{delta_n}(n+m)
  double t_total;  // T_{delta_0}(n+m)
  bool holds;      // t_total <= t_n + t_shift, which gives the event inclusion for every (b, c)
};

/// Pathwise check behind {T(n) <= bn} and {T_{delta_n}(n+m) <= cm} implying {T(n+m) <= bn+cm}.
InclusionSample event_inclusion_check(long n, long m, double eps, const RandomField& field);

/// Float slack used when comparing sums of jump times computed along different routes.
inline constexpr double kTimeSlack = 1e-9;

}  // namespace frontprop
