// End-to-end acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "frontprop/analytics.hpp"
#include "frontprop/hitting.hpp"
#include "frontprop/pipelines.hpp"
#include "frontprop/run_config.hpp"
#include "oracles.hpp"

using namespace frontprop;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Line {
  std::string id;
  bool pass;
  std::string detail;
};

std::vector<Line> lines;

void record(const std::string& id, bool pass, const std::string& detail) {
  lines.push_back({id, pass, detail});
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
}

RunConfig config(const std::string& text) { return parse_run_config(text); }

const Verdict* find(const ExperimentReport& r, const std::string& criterion) {
  for (const auto& v : r.verdicts)
    if (v.criterion == criterion) return &v;
  return nullptr;
}

void from_report(const std::string& id, const ExperimentReport& r, const std::string& criterion,
                 double budget_seconds = 0.0) {
  const Verdict* v = find(r, criterion);
  if (!v) {
    record(id, false, "no verdict '" + criterion + "' in " + r.id);
    return;
  }
  bool pass = v->pass;
  std::string detail = v->detail;
  if (budget_seconds > 0) {
    const bool in_time = r.runtime_seconds < budget_seconds;
    detail += "; " + r.id + " took " + std::to_string(static_cast<int>(r.runtime_seconds)) + " s (budget " +
              std::to_string(static_cast<int>(budget_seconds)) + " s)";
    pass = pass && in_time;
  }
  record(id, pass, detail);
}

std::string payload(const ExperimentReport& r) {
  std::string s = r.json();
  for (const auto& t : r.tables) s += "\n--" + t.name + "\n" + t.csv();
  return s;
}

void analytics_oracle() {
  double worst = 0.0;
  for (double t : {0.1, 1.0, 10.0, 100.0}) {
    const SkellamLaw law(t);
    for (long x = 1; x <= 20; ++x) worst = std::max(worst, std::fabs(law.hit_probability(x) - oracle::hit_by(t, x)));
  }
  // Monte Carlo single-walk frequencies of reaching x by time t.
  const std::vector<std::pair<double, long>> cases = {{0.1, 1}, {1.0, 1}, {1.0, 2}, {10.0, 3}, {100.0, 10}};
  const int reps = 100000;
  double worst_z = 0.0;
  std::string mc;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto [t, x] = cases[c];
    RandomField field(kSeed + c);
    int hits = 0;
    for (int i = 0; i < reps; ++i) {
      WalkLadder ladder(field, {i, 1}, 0.0, 0, Stream::base());
      hits += ladder.reach_within(x, t).has_value();
    }
    const double p = 1.0 - Gbar(t, x);
    const double z = std::fabs(hits / static_cast<double>(reps) - p) / std::sqrt(p * (1 - p) / reps);
    worst_z = std::max(worst_z, z);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s(t=%g,x=%ld) z=%.2f", c ? ", " : "", t, x, z);
    mc += buf;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "max reflection residual %.2e; ", worst);
  record("C4", worst < 1e-12 && worst_z <= 3.0, buf + mc);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string seed = "seed=" + std::to_string(kSeed) + "\n";

  {
    const ExperimentReport r = run_simulate(config("profile=delta\nreplicas=1000\n" + seed));
    from_report("C1", r, "C1", 300);
    from_report("C2", r, "C2", 300);
    from_report("C3", r, "C3");
    from_report("C13", r, "C13");
  }
  analytics_oracle();
  {
    const ExperimentReport r = run_speed(config("profile=constant:1\n" + seed));
    from_report("C5", r, "C5", 1800);
  }
  {
    const ExperimentReport r = run_ldp(config("profile=constant:1\n" + seed));
    from_report("C6", r, "C6");
  }
  {
    const ExperimentReport c = run_slowdown(config("profile=constant:1\n"));
    const ExperimentReport q = run_slowdown(config("profile=polynomial:2\n"));
    const Verdict* vc = find(c, "C7");
    const Verdict* vq = find(q, "C7");
    const double secs = c.runtime_seconds + q.runtime_seconds;
    record("C7", vc && vq && vc->pass && vq->pass && secs < 60,
           "constant: " + (vc ? vc->detail : "missing") + "; quadratic: " + (vq ? vq->detail : "missing") + "; " +
               std::to_string(secs) + " s");
    from_report("C8", c, "C8");
  }
  {
    const ExperimentReport r = run_renewal(config("profile=constant:2\na=2\n" + seed));
    from_report("C9", r, "C9", 3600);
    const Verdict* pos = find(r, "C10/positive-bias");
    const Verdict* zero = find(r, "C10/zero-bias");
    record("C10", pos && zero && pos->pass && zero->pass,
           "eps=0.1: " + (pos ? pos->detail : "missing") + "; eps=0: " + (zero ? zero->detail : "missing"));
  }
  {
    const ExperimentReport r = run_decouple(config(seed));
    from_report("C11", r, "C11");
  }
  {
    const ExperimentReport r = run_sqrt_tails(config(seed));
    from_report("C12", r, "C12");
  }
  {
    const RunConfig tails = config("replicas=5000\n" + seed);
    const RunConfig speed = config("profile=constant:1\nreplicas=20\nt_grid=50\neps=0,0.01\n" + seed);
    const RunConfig sim = config("profile=delta\nreplicas=50\n" + seed);
    const bool same = payload(run_sqrt_tails(tails)) == payload(run_sqrt_tails(tails)) &&
                      payload(run_speed(speed)) == payload(run_speed(speed)) &&
                      payload(run_simulate(sim)) == payload(run_simulate(sim));
    record("C14", same, same ? "appendixA, speed and simulate payloads byte-identical on rerun" : "payload differs");
  }

  int failed = 0;
  for (const auto& l : lines) failed += !l.pass;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%zu criteria, %d failed, %.0f s\n", lines.size(), failed, secs);
  return failed ? 1 : 0;
}
