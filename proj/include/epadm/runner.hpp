#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "epadm/config.hpp"

// Run orchestration: builds the scenario, steps it to t_end with a fixed
// step from the initial CFL estimate, advects registered loops with the
// integrator's stage velocities, and writes the diagnostics CSV, field
// snapshots and a final summary into the output directory.

namespace epadm {

struct RunSummary {
    std::string scenario;
    bool moving = false;
    bool twin = false;
    int steps = 0;
    double dt = 0.0;
    double t_final = 0.0;
    double mass_initial = 0.0;
    double mass_final = 0.0;
    double mass_drift_rel = 0.0;
    std::vector<std::pair<std::string, double>> circulation_drift;
    double frame_max_du = 0.0;   // twin runs
    double frame_max_dJ0 = 0.0;  // twin runs
};

// Throws ConfigError / InvariantError; the CLI maps those to exit codes.
RunSummary run_simulation(const RunConfig& cfg, std::ostream* log);

}  // namespace epadm
