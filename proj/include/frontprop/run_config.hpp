#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontprop/configuration.hpp"
#include "frontprop/renewal.hpp"

namespace frontprop {

/// Field-level configuration errors, all collected before throwing.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> messages);
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
};

/// Plain key=value run description. Lines starting with '#' and blank lines are
/// ignored; list values are comma separated. Grids and counts left unset fall back
/// to per-experiment defaults.
struct RunConfig {
  std::string experiment = "all";
  std::string profile = "constant:1";  // zero|finite:<eta0,eta1,...>, constant:<a>, polynomial:<beta>[:<c>], exponential:<rho>
  int a = 1;
  std::vector<double> eps;
  std::vector<double> t_grid;
  std::vector<long> n_grid;
  std::vector<long> m_grid;
  std::vector<double> b_grid;
  std::optional<int> replicas;
  std::optional<std::uint64_t> seed;
  double tol = 1e-9;
  std::string out = "out";
  RenewalMode mode = RenewalMode::diagnostic;

  // regeneration structure
  double theta = 0.5;
  double alpha1 = 1.2;
  double alpha2 = 1.5;
  double eps0 = 0.1;
  double p = 0.3;
  long L = 8;
  long M = 4;
  double alpha_hat0 = 0.0;
  double horizon = 5000.0;
  double censor_T = 200.0;
  int count = 4;

  // slowdown window
  double window_c = 0.0;
  double window_b = 0.0;  // 0: derived from the speed estimate

  // square-root tails
  double tail_A = 1.0;
  double tail_c = 1.0;
  double tail_excess = 2.0;  // f = mean + tail_excess

  // decoupling
  long block_m = 4;
  long block_ell = 2;
  double block_alpha = 0.5;
  int family = 4;

  std::map<std::string, std::string> entries;  // every key as given (after overrides)

  /// Sorted key=value text used for the hash.
  std::string canonical() const;
  std::string hash() const;

  EtaProfile eta_profile() const;
  /// Starting configuration: the profile anchored at front 0 with this a.
  ParticleConfiguration start() const;
  RenewalCandidate renewal_candidate() const;
  int replicas_or(int fallback) const { return replicas.value_or(fallback); }
};

const std::vector<std::string>& known_config_keys();

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);
/// Applies (and records) command-line overrides.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

EtaProfile parse_profile(const std::string& spec);

}  // namespace frontprop
