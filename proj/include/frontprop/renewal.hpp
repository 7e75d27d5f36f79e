#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frontprop/configuration.hpp"
#include "frontprop/randomness.hpp"
#include "frontprop/simulator.hpp"
#include "frontprop/stats.hpp"

namespace frontprop {

enum class RenewalMode { strict, diagnostic };
const char* to_string(RenewalMode mode);
RenewalMode renewal_mode_from_string(const std::string& name);

/// User-facing parameter pack. In strict mode M is derived from a; in diagnostic mode
/// M and L are taken as given.
struct RenewalCandidate {
  int a = 1;
  double theta = 0.5;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double eps0 = 0.0;
  double p = 0.3;
  long L = 16;
  long M = 4;  // ignored in strict mode
  RenewalMode mode = RenewalMode::diagnostic;
  double alpha_hat0 = 0.0;  // empirical speed of the auxiliary front at eps = 0
};

struct RenewalParams {
  int a = 1;
  double theta = 0.5;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double eps0 = 0.0;
  double p = 0.3;
  long L = 16;
  long M = 4;
  long M_prime = 0;
  RenewalMode mode = RenewalMode::diagnostic;
  double alpha_hat0 = 0.0;
  long required_L = 0;  // smallest L with L^{1/4} >= M + 1
  long window() const;  // floor(L^{1/4})
};

struct ParamCheck {
  RenewalParams params;  // derived fields are filled even when invalid
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ParamCheck validate_params(const RenewalCandidate& candidate);

/// (4(a+9), M/4 - 1).
long strict_M(int a);

/// Auxiliary front started from sites >= base at time 0: nu[k-1] is the time the walks
/// born in [max(base, base+k-M), base+k-1] need to reach base+k, each walk counted in
/// its own clock from its birth.
struct AuxiliaryFront {
  long base = 0;
  double horizon = 0.0;
  std::vector<double> nu;
  std::vector<double> cumulative;  // cumulative[k-1] = nu_1 + ... + nu_k
  bool censored = false;           // the horizon ended the list

  /// tilde r_t for t <= horizon.
  long at(double t) const;
};

AuxiliaryFront auxiliary_front(const RandomField& field, long base, int a, long M, double eps, double horizon);

/// Mean of (tilde r_T - base) / T over replicas with seeds seed ^ i.
Estimate alpha_hat(double eps, int a, long M, double horizon, int replicas, std::uint64_t seed);

/// Stopping time relative to its start; empty when no trigger was seen up to `inspected`.
struct StopValue {
  std::optional<double> time;
  double inspected = 0.0;
};

struct UVW {
  StopValue U, V, W, D;
  std::string reason;  // which of U, V, W fired first, or "censored"
};

/// Evaluates U, V, W and D from the current state of `start` (its time and front play
/// the role of the origin). `end`, when given, receives the process at start + D, or at
/// start + censor_T when D is censored.
UVW detect_UVW(const Simulation& start, const RenewalParams& params, const RandomField& field, double censor_T,
               Simulation* end = nullptr);

struct RenewalAttempt {
  int attempt;
  double S;                  // absolute time
  long R;                    // front at S
  std::optional<double> D;   // absolute time, empty when censored
  bool censored;
  std::string reason;
};

struct RenewalRecord {
  std::vector<RenewalAttempt> attempts;
  std::optional<int> K;
  std::optional<double> kappa;     // absolute
  std::optional<long> r_kappa;     // absolute
  double start_time = 0.0;
  long start_front = 0;
  double horizon = 0.0;
  double censor_T = 0.0;
  bool censored = true;
  std::string reason;

  std::string csv() const;
};

/// One regeneration search started from the current state of `sim`. On success `sim`
/// is left at time kappa.
RenewalRecord find_regeneration(Simulation& sim, const RenewalParams& params, const RandomField& field,
                                double horizon, double censor_T);

/// Successive regenerations kappa_1, kappa_2, ... from w.
std::vector<RenewalRecord> regeneration_chain(const ParticleConfiguration& w, double eps, const RenewalParams& params,
                                              const RandomField& field, int count, double horizon, double censor_T);

struct RenewalIncrement {
  double dkappa;
  double dr;
};

struct RenewalSpeed {
  Estimate speed;
  std::size_t uncensored = 0;
  std::size_t censored = 0;
  double censored_fraction() const;
};

/// sum dr / sum dkappa with a delta-method interval; needs >= min_records increments.
RenewalSpeed renewal_speed(const std::vector<RenewalIncrement>& increments, std::size_t censored,
                           std::size_t min_records = 100);

/// phi_z of the running process, including an untouched left remainder.
double running_phi(const Simulation& sim, long z, double theta);

/// exp(theta r_t - lambda t) phi_z(w_t), lambda = 2(cosh theta - 1) + 4 eps sinh theta.
double martingale_N(const Simulation& sim, long z, double theta);

/// psi_{z,t} = sum_{x <= z} exp(theta (max_{s<=t} F_s(x,i) - r_t)); needs recorded walk paths.
double psi_statistic(const SimulationTrace& trace, long z, double theta, double t);

/// Truncated space shift: drop particles born left of y, then shift everything by -y.
ParticleConfiguration truncated_shift(const ParticleConfiguration& w, long y);

}  // namespace frontprop
