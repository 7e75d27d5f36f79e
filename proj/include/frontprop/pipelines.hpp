#pragma once

#include <string>
#include <vector>

#include "frontprop/experiments.hpp"
#include "frontprop/run_config.hpp"

namespace frontprop {

/// Named experiment runs behind the command line. Each returns a report whose verdicts
/// carry the acceptance criterion they test ("C5", ...) or a "sanity/..." tag for
/// supporting checks. Unset grids and counts fall back to the sizes the acceptance
/// run uses.
ExperimentReport run_validate(const RunConfig& cfg);
ExperimentReport run_simulate(const RunConfig& cfg);
ExperimentReport run_speed(const RunConfig& cfg);
ExperimentReport run_ldp(const RunConfig& cfg);
ExperimentReport run_slowdown(const RunConfig& cfg);
ExperimentReport run_renewal(const RunConfig& cfg);
ExperimentReport run_decouple(const RunConfig& cfg);
ExperimentReport run_sqrt_tails(const RunConfig& cfg);

const std::vector<std::string>& experiment_names();  // without "all"
ExperimentReport run_named(const std::string& name, const RunConfig& cfg);

/// Writes <dir>/report.json, <dir>/sidecar.json and one CSV per table.
void write_report(const ExperimentReport& report, const std::string& dir);

}  // namespace frontprop
