// Command-line entry point: frontprop <subcommand> --config run.cfg [--out dir] [--replicas N] [--seed N]
//
// Exit codes: 0 success, 1 some criterion failed, 2 configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "frontprop/pipelines.hpp"
#include "frontprop/run_config.hpp"

using namespace frontprop;

namespace {

void print_validate(const ExperimentReport& r) {
  for (const auto& e : r.estimates) {
    if (e.name == "required_L")
      std::printf("required L >= %.0f\n", e.value);
    else
      std::printf("%s=%.0f\n", e.name == "M_prime" ? "M'" : e.name.c_str(), e.value);
  }
  for (const auto& n : r.notes) std::printf("%s\n", n.c_str());
}

int report_outcome(const ExperimentReport& r, const std::string& dir) {
  write_report(r, dir);
  int failed = 0;
  for (const auto& v : r.verdicts) {
    std::printf("%s %s %s: %s\n", v.pass ? "PASS" : "FAIL", r.id.c_str(), v.criterion.c_str(), v.detail.c_str());
    failed += !v.pass;
  }
  std::printf("%s: %zu verdicts, %d failed, report in %s\n", r.id.c_str(), r.verdicts.size(), failed, dir.c_str());
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Front propagation simulator and estimators"};
  std::string subcommand;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<int> replicas;
  std::optional<std::uint64_t> seed;
  app.add_option("subcommand", subcommand, "validate|simulate|speed|ldp|slowdown|renewal|decouple|appendixA|all")
      ->required();
  app.add_option("--config", config_path, "key=value run description");
  app.add_option("--out", out_dir, "output directory (overrides out=)");
  app.add_option("--replicas", replicas, "replica count override");
  app.add_option("--seed", seed, "seed override");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const auto& names = experiment_names();
  if (subcommand != "all" && std::find(names.begin(), names.end(), subcommand) == names.end()) {
    std::fprintf(stderr, "unknown subcommand '%s'\n", subcommand.c_str());
    return 2;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_run_config(config_path);
    if (out_dir) apply_override(cfg, "out", *out_dir);
    if (replicas) apply_override(cfg, "replicas", std::to_string(*replicas));
    if (seed) apply_override(cfg, "seed", std::to_string(*seed));
  } catch (const ConfigError& e) {
    for (const auto& m : e.messages()) std::fprintf(stderr, "config error: %s\n", m.c_str());
    return 2;
  }

  try {
    if (subcommand == "validate") {
      const ExperimentReport r = run_validate(cfg);
      print_validate(r);
      write_report(r, (std::filesystem::path(cfg.out) / "validate").string());
      return 0;
    }
    if (subcommand == "all") {
      int worst = 0;
      for (const auto& name : names) {
        if (name == "validate") continue;
        const ExperimentReport r = run_named(name, cfg);
        worst = std::max(worst, report_outcome(r, (std::filesystem::path(cfg.out) / name).string()));
      }
      return worst;
    }
    const ExperimentReport r = run_named(subcommand, cfg);
    return report_outcome(r, (std::filesystem::path(cfg.out) / subcommand).string());
  } catch (const ConfigError& e) {
    for (const auto& m : e.messages()) std::fprintf(stderr, "config error: %s\n", m.c_str());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
