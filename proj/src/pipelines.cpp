#include "frontprop/pipelines.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "frontprop/analytics.hpp"
#include "frontprop/decoupling.hpp"
#include "frontprop/hitting.hpp"

namespace frontprop {

namespace {

std::string num(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::uint64_t need_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw ConfigError({"seed: required (no wall-clock seeding)"});
  return *cfg.seed;
}

ExperimentReport start_report(const std::string& id, const RunConfig& cfg) {
  ExperimentReport r;
  r.id = id;
  r.config_hash = cfg.hash();
  r.seed = cfg.seed.value_or(0);
  return r;
}

// Derived seeds for estimators that must not share randomness with the main run.
std::uint64_t side_seed(std::uint64_t seed, std::uint64_t salt) { return seed ^ (salt * 0x9e3779b97f4a7c15ULL); }

template <class F>
ExperimentReport timed(F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport r = body();
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

bool agree(const std::optional<double>& x, const std::optional<double>& y, double guard) {
  const bool xo = !x || *x > guard;
  const bool yo = !y || *y > guard;
  if (xo || yo) return xo && yo;
  return std::fabs(*x - *y) <= kTimeSlack;
}

double hw(const Estimate& e) { return e.half_width(); }

}  // namespace

// ---------------------------------------------------------------------------

ExperimentReport run_validate(const RunConfig& cfg) {
  ExperimentReport r = start_report("validate", cfg);
  const ParamCheck check = validate_params(cfg.renewal_candidate());
  const RenewalParams& p = check.params;
  r.add_value("M", static_cast<double>(p.M));
  r.add_value("M_prime", static_cast<double>(p.M_prime));
  r.add_value("required_L", static_cast<double>(p.required_L));
  r.add_value("window", static_cast<double>(p.window()));
  r.notes.push_back(std::string("mode=") + to_string(p.mode));
  for (const auto& v : check.violations) r.notes.push_back("violated: " + v);
  // The starting profile must at least be a valid configuration.
  cfg.eta_profile();
  return r;
}

ExperimentReport run_simulate(const RunConfig& cfg) {
  return timed([&] {
    const std::uint64_t seed = need_seed(cfg);
    ExperimentReport r = start_report("simulate", cfg);
    const std::vector<double> eps = cfg.eps.empty() ? std::vector<double>{0.0, 0.05, 0.1, 0.25} : cfg.eps;
    const double t = cfg.t_grid.empty() ? 50.0 : cfg.t_grid.back();
    const int seeds = cfg.replicas_or(1000);
    const ParticleConfiguration w = cfg.start();

    {
      RandomField field(seed);
      SimulationOptions o;
      o.tol = cfg.tol;
      const auto traces = coupled_run(w, eps, t, field, o);
      DataTable table{"front_paths", {"eps", "time", "front"}, {}, {}};
      for (std::size_t k = 0; k < traces.size(); ++k)
        for (const auto& [s, front] : traces[k].front_path)
          table.rows.push_back({eps[k], s, static_cast<double>(front)});
      r.tables.push_back(std::move(table));
    }

    const CouplingCheck cc = coupling_check(w, eps, t, seeds, seed);
    r.add_value("coupling_front_violations", static_cast<double>(cc.front_violations), cc.samples);
    r.add_value("coupling_hitting_violations", static_cast<double>(cc.hitting_violations), cc.samples);
    r.verdict("C1", cc.front_violations == 0 && cc.hitting_violations == 0,
              std::to_string(cc.samples - std::max(cc.front_violations, cc.hitting_violations)) + "/" +
                  std::to_string(cc.samples) + " samples ordered");

    // Chain infimum against the event simulation on three small configurations.
    ParticleConfiguration custom = ParticleConfiguration::delta(0);
    custom.particles[{-1, 1}] = -1;
    custom.particles[{-3, 1}] = -3;
    const std::vector<ParticleConfiguration> configs = {ParticleConfiguration::delta(0),
                                                        ParticleConfiguration::a_delta(0, 2), custom};
    const int chain_seeds = std::min(seeds, 500);
    constexpr double guard = 1e6;
    const auto mism = replicate<int>(static_cast<std::size_t>(chain_seeds), [&](std::size_t i) {
      RandomField field(replica_seed(seed, i));
      int bad = 0;
      for (const auto& c : configs)
        for (long u = 1; u <= 5; ++u) {
          const ChainResult oracle = chain_oracle(c, u, 0.0, field);
          const auto sim = simulated_T(c, u, 0.0, field, std::nullopt, guard);
          if (!oracle.certified || !agree(oracle.time, sim, guard)) ++bad;
        }
      return bad;
    });
    std::size_t chain_bad = 0;
    for (int b : mism) chain_bad += static_cast<std::size_t>(b);
    const std::size_t chain_total = mism.size() * configs.size() * 5;
    r.add_value("chain_oracle_mismatches", static_cast<double>(chain_bad), chain_total);
    r.verdict("C2", chain_bad == 0, std::to_string(chain_total - chain_bad) + "/" + std::to_string(chain_total) +
                                        " (seed, config, target) triples agree");

    const auto sub = replicate<std::pair<bool, bool>>(static_cast<std::size_t>(seeds), [&](std::size_t i) {
      RandomField field(replica_seed(seed, i));
      const bool s = subadditivity_check(ParticleConfiguration::delta(0), 3, 6, 0.0, field).holds;
      const bool e = event_inclusion_check(4, 4, 0.0, field).holds;
      return std::pair{s, e};
    });
    std::size_t sub_ok = 0, inc_ok = 0;
    for (const auto& [s, e] : sub) {
      sub_ok += s;
      inc_ok += e;
    }
    r.add_value("subadditivity_holds", static_cast<double>(sub_ok), sub.size());
    r.add_value("event_inclusion_holds", static_cast<double>(inc_ok), sub.size());
    r.verdict("C3", sub_ok == sub.size() && inc_ok == sub.size(),
              "subadditivity " + std::to_string(sub_ok) + "/" + std::to_string(sub.size()) + ", inclusion " +
                  std::to_string(inc_ok) + "/" + std::to_string(sub.size()));

    const TruncationCheck tc = truncation_check(cfg.a, 100.0, cfg.tol, seeds, seed);
    const double share = static_cast<double>(tc.identical) / static_cast<double>(tc.samples);
    // Discrepancies are allowed up to the tolerance budget plus three binomial sds.
    const double allowed = tc.tol * static_cast<double>(tc.samples) +
                           3.0 * std::sqrt(tc.tol * static_cast<double>(tc.samples));
    const double diff = static_cast<double>(tc.samples - tc.identical);
    r.add_value("truncation_depth", static_cast<double>(tc.K));
    r.add_value("truncation_identical_share", share, tc.samples);
    r.verdict("C13", share >= 0.999,
              "cutoff K=" + std::to_string(tc.K) + ": " + std::to_string(tc.identical) + "/" +
                  std::to_string(tc.samples) + " identical front paths (K vs 2K)");
    r.verdict("sanity/truncation-discrepancies", diff <= std::max(allowed, 0.0),
              num(diff) + " discrepancies, tolerance budget " + num(allowed));
    return r;
  });
}

ExperimentReport run_speed(const RunConfig& cfg) {
  return timed([&] {
    const std::uint64_t seed = need_seed(cfg);
    ExperimentReport r = start_report("speed", cfg);
    const std::vector<double> eps = cfg.eps.empty() ? std::vector<double>{0.0, 0.01} : cfg.eps;
    const std::vector<double> ts = cfg.t_grid.empty() ? std::vector<double>{100, 200, 400} : cfg.t_grid;
    const int reps = cfg.replicas_or(200);
    const ParticleConfiguration w = cfg.start();
    SpeedOptions opts;
    opts.tol = cfg.tol;

    std::vector<std::vector<SpeedEstimate>> curves;
    DataTable table{"speed", {"eps", "t", "v_hat", "ci_lo", "ci_hi", "n", "capped"}, {}, {}};
    for (double e : eps) {
      curves.push_back(speed_curve(w, e, ts, reps, seed, opts));
      for (const auto& s : curves.back()) {
        r.add("v_hat(eps=" + num(e) + ",t=" + num(s.t) + ")", s.speed);
        table.rows.push_back({e, s.t, s.speed.value, s.speed.lo, s.speed.hi, static_cast<double>(s.speed.n),
                              static_cast<double>(s.capped)});
      }
    }
    r.tables.push_back(std::move(table));

    const auto& base = curves.front();
    bool overlap = true, shrink = true;
    for (std::size_t k = 0; k + 1 < base.size(); ++k) {
      if (base[k].speed.hi < base[k + 1].speed.lo || base[k + 1].speed.hi < base[k].speed.lo) overlap = false;
      if (!(hw(base[k + 1].speed) < hw(base[k].speed))) shrink = false;
    }
    std::string detail = "CIs over t " + std::string(overlap ? "overlap" : "do not overlap") + " and " +
                         (shrink ? "shrink" : "do not shrink");
    bool continuity = true;
    const auto i0 = std::find(eps.begin(), eps.end(), 0.0);
    const auto i1 = std::find(eps.begin(), eps.end(), 0.01);
    if (i0 != eps.end() && i1 != eps.end()) {
      const Estimate& v0 = curves[static_cast<std::size_t>(i0 - eps.begin())].back().speed;
      const Estimate& v1 = curves[static_cast<std::size_t>(i1 - eps.begin())].back().speed;
      const double gap = std::fabs(v1.value - v0.value);
      const double allowed = std::max(0.02, hw(v0) + hw(v1));
      continuity = gap < allowed;
      r.add_value("speed_gap(0.01,0)", gap);
      detail += "; |v(0.01)-v(0)| = " + num(gap) + " vs allowed " + num(allowed);
    }
    r.verdict("C5", overlap && shrink && continuity, detail);

    bool ordered = true;
    for (std::size_t k = 0; k + 1 < curves.size(); ++k)
      for (std::size_t j = 0; j < ts.size(); ++j)
        if (curves[k][j].speed.value > curves[k + 1][j].speed.value) ordered = false;
    r.verdict("sanity/speed-monotone-in-eps", ordered, "coupled means ordered across the bias grid");

    const Estimate drift = free_walk_drift(0.25, 100.0, 2000, side_seed(seed, 1));
    r.add("free_walk_drift(eps=0.25)", drift);
    r.verdict("sanity/free-walk-drift", std::fabs(drift.value - 1.0) <= 3 * drift.std_error,
              "drift " + num(drift.value) + " vs 4 eps = 1");

    const std::vector<long> ms = cfg.m_grid.empty() ? std::vector<long>{8, 16, 32, 64, 128} : cfg.m_grid;
    const KingmanResult k = kingman_check(cfg.a, ms, reps, side_seed(seed, 2), cfg.tol);
    DataTable kt{"kingman", {"m", "mean_T_over_m", "ci_lo", "ci_hi"}, {}, {}};
    bool monotone = true;
    for (std::size_t j = 0; j < ms.size(); ++j) {
      kt.rows.push_back({static_cast<double>(ms[j]), k.per_site[j].value, k.per_site[j].lo, k.per_site[j].hi});
      if (j + 1 < ms.size() && k.per_site[j + 1].value > k.per_site[j].value + hw(k.per_site[j]) + hw(k.per_site[j + 1]))
        monotone = false;
    }
    r.tables.push_back(std::move(kt));
    r.add("kingman_limit", k.limit);
    r.add("kingman_fit", k.extrapolation);
    if (cfg.profile == "constant:" + std::to_string(cfg.a)) {
      // 1/v by the delta method from the largest-t, eps = 0 estimate.
      const Estimate& v = base.back().speed;
      const double inv = 1.0 / v.value;
      const double inv_se = v.std_error / (v.value * v.value);
      const double gap = std::fabs(k.limit.value - inv);
      const double allowed = 1.96 * std::sqrt(k.limit.std_error * k.limit.std_error + inv_se * inv_se);
      r.verdict("sanity/kingman-limit", gap <= allowed,
                "limit " + num(k.limit.value) + " vs 1/v " + num(inv) + " (allowed " + num(allowed) + ")");
    }
    r.verdict("sanity/kingman-monotone", monotone, "m^-1 E T(m) nonincreasing within CI");
    return r;
  });
}

ExperimentReport run_ldp(const RunConfig& cfg) {
  return timed([&] {
    const std::uint64_t seed = need_seed(cfg);
    ExperimentReport r = start_report("ldp", cfg);
    const ParticleConfiguration w = cfg.start();
    const int reps = cfg.replicas_or(100000);
    std::vector<long> ns = cfg.n_grid.empty() ? std::vector<long>{10, 20} : cfg.n_grid;
    std::sort(ns.begin(), ns.end());

    SpeedOptions so;
    so.tol = cfg.tol;
    const Estimate v = estimate_speed(w, 0.0, 400.0, 200, side_seed(seed, 3), so).speed;
    r.add("v_hat", v);
    const double zero_top = v.value - 2 * hw(v);

    std::vector<double> below, above;
    if (!cfg.b_grid.empty()) {
      for (double b : cfg.b_grid) (b <= zero_top ? below : above).push_back(b);
    } else {
      for (double b = 0.1; b <= zero_top + 1e-12; b += 0.1) below.push_back(b);
      for (int k = 1; k <= 12; ++k) above.push_back(v.value + 0.2 * k);
    }
    std::vector<double> grid = below;
    for (double b : above)
      if (b > v.value) grid.push_back(b);
    const double b_min = *std::min_element(grid.begin(), grid.end());

    std::map<long, std::vector<double>> samples;
    std::map<long, std::vector<RatePoint>> curves;
    DataTable table{"rate_function", {"n", "b", "p", "I", "I_lo", "I_hi", "censored"}, {}, {2}};
    for (long n : ns) {
      samples[n] = hitting_samples(w, n, 0.0, static_cast<double>(n) / b_min, reps, seed, cfg.tol);
      curves[n] = rate_curve(samples[n], n, grid);
      for (const auto& p : curves[n])
        table.rows.push_back({static_cast<double>(n), p.b, std::exp(p.logp.value), p.I, p.I_lo, p.I_hi,
                              p.logp.censored ? 1.0 : 0.0});
    }
    r.tables.push_back(std::move(table));

    const long n = ns.back();
    const auto& curve = curves[n];
    std::string zero_fail;
    for (const auto& p : curve) {
      if (p.b > zero_top) continue;
      r.estimates.push_back({"I(b=" + num(p.b) + ")", p.I, p.I_lo, p.I_hi, static_cast<std::size_t>(reps), false});
      if (p.I_lo > 0) zero_fail += (zero_fail.empty() ? "" : ",") + num(p.b, 3);
    }
    std::vector<RatePoint> pos;
    for (const auto& p : curve)
      if (p.b > v.value && !p.logp.censored && p.logp.successes >= 100 && pos.size() < 3) pos.push_back(p);
    bool positive = pos.size() == 3, convex = pos.size() == 3;
    std::string pdetail;
    if (pos.size() == 3) {
      for (const auto& p : pos) {
        r.estimates.push_back({"I(b=" + num(p.b) + ")", p.I, p.I_lo, p.I_hi, static_cast<std::size_t>(reps), false});
        if (!(p.I_lo > 0)) positive = false;
      }
      const double d2 = pos[2].I - 2 * pos[1].I + pos[0].I;
      const auto h = [](const RatePoint& p) { return 0.5 * (p.I_hi - p.I_lo); };
      const double tolerance = h(pos[0]) + 2 * h(pos[1]) + h(pos[2]);
      convex = d2 >= -tolerance;
      r.add_value("I_second_difference", d2);
      pdetail = "b=" + num(pos[0].b) + "," + num(pos[1].b) + "," + num(pos[2].b) + " second difference " + num(d2) +
                " (tolerance " + num(tolerance) + ")";
    } else {
      pdetail = "fewer than 3 estimable levels above v";
    }
    const std::string zdetail = zero_fail.empty() ? "I = 0 within CI for every b <= " + num(zero_top)
                                                  : "I > 0 beyond CI at b = " + zero_fail + " (n = " +
                                                        std::to_string(n) + ")";
    r.verdict("C6", zero_fail.empty() && positive && convex, zdetail + "; " + pdetail);

    if (ns.size() >= 2) {
      // Superadditivity of u_n gives I_{2n} <= I_n; check on the positive levels.
      const auto& small = curves[ns[ns.size() - 2]];
      bool ok = true;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const auto& a = small[j];
        const auto& b = curve[j];
        if (a.logp.censored || b.logp.censored || b.b <= v.value) continue;
        if (b.I_lo > a.I_hi) ok = false;
      }
      r.verdict("sanity/rate-monotone-in-n", ok, "I_n(b) nonincreasing in n within CI above v");
    }
    if (ns.size() >= 2 && ns[ns.size() - 1] == 2 * ns[ns.size() - 2]) {
      const long h = ns[ns.size() - 2];
      bool ok = true;
      std::string d;
      for (double sb : {v.value + 0.2, v.value + 0.4})
        for (double sc : {v.value + 0.2, v.value + 0.4}) {
          const SuperadditivityCheck s = superadditivity_check(samples[h], h, 1.0 / sb, samples[h], h, 1.0 / sc,
                                                               samples[2 * h]);
          if (!s.holds) ok = false;
          d = "last: lhs " + num(s.lhs) + " rhs " + num(s.rhs);
        }
      r.verdict("sanity/superadditivity", ok, d);
    }
    return r;
  });
}

ExperimentReport run_slowdown(const RunConfig& cfg) {
  return timed([&] {
    ExperimentReport r = start_report("slowdown", cfg);
    const EtaProfile profile = cfg.eta_profile();
    const std::vector<double> ts = cfg.t_grid.empty() ? log_grid(100.0, 10000.0, 9) : cfg.t_grid;

    if (profile.satisfies_growth_condition()) {
      const SlowdownScaling s = slowdown_scaling(profile, ts);
      DataTable table{"slowdown", {"t", "log_P", "P"}, {}, {2}};
      for (std::size_t j = 0; j < ts.size(); ++j)
        table.rows.push_back({ts[j], s.log_probability[j], std::exp(s.log_probability[j])});
      r.tables.push_back(std::move(table));
      r.add("log(-log P) vs log t", s.fit);
      r.add_value("tail_slope", s.tail_slope);
      const std::string d = "slope " + num(s.fit.slope) + ", R2 " + num(s.fit.r2);
      if (profile.law() == TailLaw::constant) {
        r.verdict("C7", s.fit.slope >= 0.40 && s.fit.slope <= 0.60, d + " (expected [0.40, 0.60])");
      } else if (profile.law() == TailLaw::polynomial && profile.param() == 2.0) {
        r.verdict("C7", s.fit.slope >= 0.85 && s.fit.slope <= 1.15, d + " (expected [0.85, 1.15])");
      } else if (profile.finite_support()) {
        r.verdict("sanity/finite-support-slowdown", s.tail_slope < 0.2, "tail slope " + num(s.tail_slope));
      }
    } else {
      r.notes.push_back("profile breaks the growth condition: P(r_t = 0) is not a convergent product");
    }

    // Exponential slowdown decay under fast-growing profiles versus the constant one.
    constexpr double b = 0.05;
    constexpr double floor = 0.1;
    const std::vector<double> tt = {50, 100, 200};
    DataTable et{"slowdown_bound_exponent", {"t", "exponential_profile", "constant_profile"}, {}, {}};
    bool above = true, decays = true;
    double prev = INFINITY, first = 0;
    for (double t : tt) {
      const double e = slowdown_bound_exponent(EtaProfile::exponential(0.5), b, t).value;
      const double c = slowdown_bound_exponent(EtaProfile::constant(cfg.a), b, t).value;
      et.rows.push_back({t, e, c});
      if (!(e >= floor)) above = false;
      if (!(c < prev)) decays = false;
      if (t == tt.front()) first = c;
      prev = c;
    }
    if (!(prev < 0.5 * first)) decays = false;
    r.tables.push_back(std::move(et));
    r.verdict("C8", above && decays,
              std::string("exponential profile exponent ") + (above ? ">=" : "not >=") + " floor " + num(floor) +
                  "; constant profile exponent " + (decays ? "decays" : "does not decay"));

    if (profile.law() == TailLaw::constant && cfg.seed) {
      const ParticleConfiguration w = cfg.start();
      SpeedOptions so;
      so.tol = cfg.tol;
      const Estimate v = estimate_speed(w, 0.0, 200.0, 100, side_seed(*cfg.seed, 4), so).speed;
      WindowEventParams wp;
      wp.c = cfg.window_c;
      wp.b = cfg.window_b > 0 ? cfg.window_b : 0.9 * v.value;
      wp.v = v.value;
      const auto rates =
          slowdown_window_experiment(w, wp, {10, 20, 40}, cfg.replicas_or(500), *cfg.seed, cfg.tol);
      DataTable wt{"slowdown_window", {"t", "P_B", "P_C", "P_D", "P_BCD", "P_target", "inclusion_failures"}, {},
                   {1, 2, 3, 4, 5}};
      std::size_t bad = 0;
      for (const auto& x : rates) {
        wt.rows.push_back({x.t, x.B.p, x.C.p, x.D.p, x.BCD.p, x.target.p, static_cast<double>(x.inclusion_failures)});
        bad += x.inclusion_failures;
        r.add("P(target, t=" + num(x.t) + ")", x.target);
      }
      r.tables.push_back(std::move(wt));
      r.verdict("sanity/window-inclusion", bad == 0, std::to_string(bad) + " samples with B, C, D but outside the window");
    }
    return r;
  });
}

ExperimentReport run_renewal(const RunConfig& cfg) {
  return timed([&] {
    const std::uint64_t seed = need_seed(cfg);
    ExperimentReport r = start_report("renewal", cfg);
    RenewalCandidate cand = cfg.renewal_candidate();
    if (!(cand.alpha_hat0 > 0)) {
      const long M = cand.mode == RenewalMode::strict ? strict_M(cand.a) : cand.M;
      const Estimate ah = alpha_hat(0.0, cand.a, M, 2000.0, 20, side_seed(seed, 5));
      r.add("alpha_hat0", ah);
      cand.alpha_hat0 = ah.value;
    }
    const ParamCheck check = validate_params(cand);
    if (!check.ok()) {
      std::vector<std::string> msgs;
      for (const auto& v : check.violations) msgs.push_back("renewal parameters: " + v);
      throw ConfigError(msgs);
    }
    const std::vector<double> eps = cfg.eps.empty() ? std::vector<double>{0.1, 0.0} : cfg.eps;
    const int reps = cfg.replicas_or(100);
    const ParticleConfiguration w = cfg.start();

    for (double e : eps) {
      const RenewalExperiment x =
          renewal_experiment(w, e, check.params, reps, cfg.count, cfg.horizon, cfg.censor_T, seed);
      const std::string tag = "eps=" + num(e);
      DataTable inc{"renewal_increments_" + tag, {"dkappa", "dr"}, {}, {}};
      for (const auto& i : x.increments) inc.rows.push_back({i.dkappa, i.dr});
      r.tables.push_back(std::move(inc));
      const std::size_t uncensored = x.records - x.censored_records;
      r.add_value("records(" + tag + ")", static_cast<double>(x.records));
      r.add_value("censored_records(" + tag + ")", static_cast<double>(x.censored_records));

      std::vector<double> dk;
      for (const auto& i : x.increments) dk.push_back(i.dkappa);
      std::optional<SurvivalFits> fits;
      if (dk.size() >= 10) {
        try {
          fits = survival_fits(dk);
        } catch (const std::invalid_argument&) {
        }
      }
      if (fits) {
        DataTable st{"kappa_survival_" + tag, {"k", "survival"}, {}, {1}};
        for (std::size_t j = 0; j < fits->k.size(); ++j) st.rows.push_back({fits->k[j], fits->survival[j]});
        r.tables.push_back(std::move(st));
        r.add("log S vs k (" + tag + ")", fits->exponential);
        r.add("log S vs log k (" + tag + ")", fits->power);
      }

      if (e > 0) {
        bool ok = uncensored >= 300 && x.speed.has_value() && x.ks.has_value() && x.lag1_pairs > 0;
        std::string d = std::to_string(uncensored) + " uncensored records";
        if (x.speed) {
          r.add("v_renewal(" + tag + ")", x.speed->speed);
          SpeedOptions so;
          so.tol = cfg.tol;
          const Estimate lln = estimate_speed(w, e, 400.0, reps, side_seed(seed, 6), so).speed;
          r.add("v_lln(" + tag + ")", lln);
          const double gap = std::fabs(x.speed->speed.value - lln.value);
          const double allowed = 1.96 * std::hypot(x.speed->speed.std_error, lln.std_error);
          ok = ok && gap <= allowed;
          d += "; |v_ren - v_lln| = " + num(gap) + " (allowed " + num(allowed) + ")";
        }
        if (x.lag1_pairs > 0) {
          const double sigma = 1.0 / std::sqrt(static_cast<double>(x.lag1_pairs));
          r.add_value("lag1(" + tag + ")", x.lag1, x.lag1_pairs);
          ok = ok && std::fabs(x.lag1) <= 3 * sigma;
          d += "; lag-1 " + num(x.lag1) + " (3 sigma " + num(3 * sigma) + ")";
        }
        if (x.ks) {
          r.add_value("ks_p(" + tag + ")", x.ks->p_value);
          ok = ok && x.ks->p_value > 0.01;
          d += "; KS p " + num(x.ks->p_value);
        }
        r.verdict("C9", ok, d);
        r.verdict("C10/positive-bias", fits && fits->exponential.r2 > 0.95,
                  fits ? "log-linear R2 " + num(fits->exponential.r2) : "too few increments");
      } else {
        r.verdict("C10/zero-bias", fits && fits->aic_power < fits->aic_exponential,
                  fits ? "AIC log-log " + num(fits->aic_power) + " vs log-linear " + num(fits->aic_exponential)
                       : "too few increments");
      }
    }
    return r;
  });
}

ExperimentReport run_decouple(const RunConfig& cfg) {
  return timed([&] {
    const std::uint64_t seed = need_seed(cfg);
    ExperimentReport r = start_report("decouple", cfg);
    DecoupleSpec spec;
    spec.m = cfg.block_m;
    spec.ell = cfg.block_ell;
    spec.alpha = cfg.block_alpha;
    spec.a = cfg.a;
    spec.tol = cfg.tol;
    const int n = cfg.replicas_or(1000);
    const int fam = cfg.family;

    struct Row {
      DecoupleSample s;
      std::vector<double> family;
      double reference;
    };
    const std::uint64_t ref_seed = side_seed(seed, 7);
    const auto rows = replicate<Row>(static_cast<std::size_t>(n), [&](std::size_t i) {
      RandomField field(replica_seed(seed, i));
      RandomField other(replica_seed(ref_seed, i));
      const auto t = simulated_T(ParticleConfiguration::I(0, spec.a), spec.m, 0.0, other, spec.tol, spec.horizon);
      return Row{decouple_sample(spec, field), decoupled_family(spec, fam, field), t ? *t : INFINITY};
    });
    std::size_t incl = 0, ident = 0, cert = 0;
    std::vector<double> tp, ref;
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(fam));
    DataTable table{"decoupled_samples", {"T", "T_prime", "J", "K", "L", "reference_T"}, {}, {}};
    for (const auto& row : rows) {
      incl += row.s.inclusion_holds();
      ident += row.s.identities_hold();
      cert += row.s.certified;
      tp.push_back(row.s.T_prime);
      ref.push_back(row.reference);
      for (int p = 0; p < fam; ++p) cols[static_cast<std::size_t>(p)].push_back(row.family[static_cast<std::size_t>(p)]);
      table.rows.push_back({row.s.T, row.s.T_prime, row.s.J, row.s.K, row.s.L, row.reference});
    }
    r.tables.push_back(std::move(table));
    const KsResult ks = ks_two_sample(tp, ref);
    r.add_value("ks_p(T', T)", ks.p_value, tp.size());
    const double sigma = 1.0 / std::sqrt(static_cast<double>(n));
    double worst = 0;
    for (int p = 0; p < fam; ++p)
      for (int q = p + 1; q < fam; ++q)
        worst = std::max(worst, std::fabs(correlation(cols[static_cast<std::size_t>(p)], cols[static_cast<std::size_t>(q)])));
    r.add_value("max_abs_family_correlation", worst, static_cast<std::size_t>(n));
    const bool ok = incl == rows.size() && ks.p_value > 0.01 && worst <= 3 * sigma;
    r.verdict("C11", ok,
              "inclusion " + std::to_string(incl) + "/" + std::to_string(rows.size()) + "; KS p " + num(ks.p_value) +
                  "; max |corr| " + num(worst) + " (3 sigma " + num(3 * sigma) + ")");
    r.verdict("sanity/chain-identities", ident == rows.size() && cert == rows.size(),
              std::to_string(ident) + " identities, " + std::to_string(cert) + " certified of " +
                  std::to_string(rows.size()));

    const EventRates er = event_rates(spec, side_seed(seed, 8), static_cast<std::size_t>(n));
    r.add("P(D)", er.D);
    r.add("P(F)", er.F);
    r.add_value("D_bound", er.D_bound);
    r.add_value("F_bound", er.F_bound);
    r.verdict("sanity/event-bounds", er.D.lo <= er.D_bound && er.F.lo <= er.F_bound,
              "P(D) " + num(er.D.p) + " <= " + num(er.D_bound) + ", P(F) " + num(er.F.p) + " <= " + num(er.F_bound));

    bool tail_ok = true;
    DataTable tt{"hitting_tail", {"t", "P_hat", "product_bound", "coarse_bound"}, {}, {1, 2, 3}};
    for (double t : {1.0, 2.0, 4.0, 8.0}) {
      const auto k = static_cast<std::size_t>(std::count_if(ref.begin(), ref.end(), [&](double x) { return x >= t; }));
      const Proportion p = wilson(k, ref.size());
      const TailBound b = hitting_tail_bound(EtaProfile::constant(spec.a), spec.m, t);
      tt.rows.push_back({t, p.p, b.product, b.coarse});
      if (p.lo > b.product) tail_ok = false;
    }
    r.tables.push_back(std::move(tt));
    r.verdict("sanity/hitting-tail-bound", tail_ok, "empirical P(T >= t) below the product bound");
    return r;
  });
}

ExperimentReport run_sqrt_tails(const RunConfig& cfg) {
  return timed([&] {
    const std::uint64_t seed = need_seed(cfg);
    ExperimentReport r = start_report("appendixA", cfg);
    bool bound_ok = true;
    DataTable it{"sqrt_tail_integral", {"nu", "x", "exact", "bound"}, {}, {}};
    for (double nu : {0.1, 0.5, 1.0, 2.0, 5.0})
      for (double x : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 1000.0}) {
        const SqrtTail s = sqrt_tail_integral(nu, x);
        it.rows.push_back({nu, x, s.exact, s.bound});
        if (!(s.exact <= s.bound)) bound_ok = false;
      }
    r.tables.push_back(std::move(it));

    SqrtTailLaw law{cfg.tail_A, cfg.tail_c};
    const double f = law.mean() + cfg.tail_excess;
    const std::vector<long> ns =
        cfg.n_grid.empty() ? std::vector<long>{1, 2, 4, 8, 16, 32, 64, 128} : cfg.n_grid;
    const int reps = cfg.replicas_or(200000);
    const SqrtTailExperiment x = sqrt_tail_ld_experiment(law, f, ns, reps, seed);
    DataTable lt{"sqrt_tail_ld", {"n", "p", "log_p", "censored"}, {}, {1}};
    for (const auto& p : x.points)
      lt.rows.push_back({static_cast<double>(p.n), std::exp(p.logp.value), p.logp.value, p.logp.censored ? 1.0 : 0.0});
    r.tables.push_back(std::move(lt));
    r.add_value("f", f);
    r.add_value("mean", law.mean());
    std::string d = "integral bound " + std::string(bound_ok ? "holds" : "fails") + " on the grid; " + x.verdict;
    bool fit_ok = false;
    if (x.fit) {
      r.add("log P vs sqrt n", *x.fit);
      fit_ok = x.fit->slope < 0 && x.fit->r2 > 0.9;
      d += ", slope " + num(x.fit->slope) + ", R2 " + num(x.fit->r2);
    }
    r.verdict("C12", bound_ok && x.precondition_ok && fit_ok, d);
    for (const auto& p : x.points)
      if (p.n == 1) {
        const double ph = std::exp(p.logp.value);
        const double se = std::sqrt(x.single_draw_exact * (1 - x.single_draw_exact) / static_cast<double>(reps));
        r.verdict("sanity/single-draw-tail", std::fabs(ph - x.single_draw_exact) <= 3 * se,
                  "P(X >= f) " + num(ph) + " vs exact " + num(x.single_draw_exact));
      }
    return r;
  });
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"validate", "simulate", "speed",    "ldp",
                                                 "slowdown", "renewal",  "decouple", "appendixA"};
  return names;
}

ExperimentReport run_named(const std::string& name, const RunConfig& cfg) {
  if (name == "validate") return run_validate(cfg);
  if (name == "simulate") return run_simulate(cfg);
  if (name == "speed") return run_speed(cfg);
  if (name == "ldp") return run_ldp(cfg);
  if (name == "slowdown") return run_slowdown(cfg);
  if (name == "renewal") return run_renewal(cfg);
  if (name == "decouple") return run_decouple(cfg);
  if (name == "appendixA") return run_sqrt_tails(cfg);
  throw ConfigError({"experiment: unknown name '" + name + "'"});
}

void write_report(const ExperimentReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    out << text;
  };
  put("report.json", report.json());
  put("sidecar.json", report.sidecar());
  for (const auto& t : report.tables) put(t.name + ".csv", t.csv());
}

}  // namespace frontprop
