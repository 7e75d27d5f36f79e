#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "frontprop/configuration.hpp"
#include "frontprop/hitting.hpp"
#include "frontprop/randomness.hpp"
#include "frontprop/stats.hpp"

namespace frontprop {

/// Block j covers the passage from I_{mj} to m(j+1). Walks started at or below
/// mj - m*ell are "remote"; the decoupled time drives them with the fresh(j) copy.
struct DecoupleSpec {
  long m = 4;
  long ell = 2;
  long j = 0;
  double alpha = 0.5;
  int a = 1;
  double tol = 1e-9;         // truncation tolerance for the infinite source set
  double horizon = 200.0;    // time up to which that truncation is certified
  long window_cap = 12;      // largest m*ell + m accepted for exact chain values

  void validate() const;
  long base() const { return m * j; }
  long target() const { return m * (j + 1); }
  long remote_top() const { return m * j - m * ell; }
  double threshold() const;  // alpha (m ell)^2
};

enum class ChainVariant { J, K, L };
const char* to_string(ChainVariant v);

/// Depth below mj past which sources are dropped (truncation certificate at `horizon`).
long source_depth(const DecoupleSpec& spec);

/// T'_{I_mj}(m(j+1)): remote sources use fresh(j), the rest the base family.
ChainResult decoupled_T(const DecoupleSpec& spec, const RandomField& field);
/// T_{I_mj}(m(j+1)) through the same chain solver with base randomness only.
ChainResult block_T(const DecoupleSpec& spec, const RandomField& field);
/// J (remote sources, fresh), K (remote sources, base), L (near sources, base).
ChainResult restricted_chain(const DecoupleSpec& spec, ChainVariant which, const RandomField& field);

struct DecoupleSample {
  double T = INFINITY;
  double T_prime = INFINITY;
  double J = INFINITY;
  double K = INFINITY;
  double L = INFINITY;
  bool certified = true;
  bool D = false;  // min(J, K) < alpha (m ell)^2
  bool F = false;  // L >= alpha (m ell)^2
  bool identities_hold() const;  // min(J,L) == T' and min(K,L) == T exactly
  bool inclusion_holds() const;  // min(J,K) >= L implies T' == T
};

DecoupleSample decouple_sample(const DecoupleSpec& spec, const RandomField& field);

/// T' for the block family j_p = j + p(ell + 1), p = 0..count-1.
std::vector<double> decoupled_family(const DecoupleSpec& spec, int count, const RandomField& field);

struct EventRates {
  Proportion D;
  Proportion F;
  double D_bound;  // 2a sum_{d > m ell} (1 - gbar_t(d)), t = alpha (m ell)^2
  double F_bound;  // prod_{-m ell < x <= 0} gbar_t(1 - x)^a
  std::size_t samples;
};

/// Monte Carlo frequencies of D(j) and F(j) over seeds seed ^ i, with their bounds.
EventRates event_rates(const DecoupleSpec& spec, std::uint64_t seed, std::size_t samples);
double D_union_bound(const DecoupleSpec& spec);
double F_product_bound(const DecoupleSpec& spec);

/// Tail bounds on P(T_w(m) >= t) for w with front 0 and unmoved particles given by
/// `profile`: the exact product over x in [-floor(sqrt t), 0] of gbar_t(m - x)^eta(x),
/// and its coarse form gbar_t(m + floor(sqrt t))^{H(-floor(sqrt t))}.
struct TailBound {
  double product;
  double coarse;
};
TailBound hitting_tail_bound(const EtaProfile& profile, long m, double t);

/// Uniform (1 - rho)^H form: rho = 1 - sup_{t >= t0} gbar_t(m + floor(sqrt t)) on
/// the grid, and A = (1 - rho)^{-H(-floor(sqrt t0))}.
struct TailConstants {
  double rho;
  double A;
  double t0;
};
TailConstants fit_tail_constants(const EtaProfile& profile, long m, double t0, const std::vector<double>& t_grid);

}  // namespace frontprop
