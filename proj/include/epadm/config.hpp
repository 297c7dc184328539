#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epadm/scenarios.hpp"

// Sectioned key = value run configuration. Unknown sections and keys are
// rejected with the offending line. Loops are declared as [loop:<name>]
// sections; command-line overrides use section.key=value.

namespace epadm {

struct RunConfig {
    // [run]
    std::string scenario = "rest_state";
    double t_end = -1.0;  // <0: scenario default

    // [grid]
    int dim = 0;  // 0: scenario default
    std::array<int, 3> points{0, 0, 0};
    std::array<double, 3> extent{1.0, 1.0, 1.0};

    // [eos]
    bool eos_set = false;
    std::string eos_kind = "dust";
    double eos_m = 1.0;
    double eos_K = 0.1;
    double eos_Gamma = 2.0;

    // [frame]
    std::string frame_kind;  // empty: scenario default
    Vec3 frame_velocity{0.2, 0.0, 0.0};
    double frame_amplitude = 0.02;
    double frame_omega = 1.0;

    // [numerics]
    int fd_order = 4;
    int interp_order = 3;
    double safety = 0.4;
    bool hyperdissipation = false;
    double nu = 0.0;

    // [scenario]
    double amplitude = 1e-4;
    double vortex_strength = 0.25;
    double vortex_width = 2.0;
    double velocity_cap = 0.5;
    Vec3 shift{0.3, 0.0, 0.0};
    double perturbation = 0.0;
    Vec3 advection_velocity{0.2, 0.0, 0.0};

    // [output]
    std::string out_dir = "out";
    int cadence = 10;  // steps between diagnostic rows / snapshots
    std::vector<std::string> output_fields{"J0", "u"};
    bool write_snapshots = true;

    // [verify]
    std::uint64_t seed = 20240901;

    std::vector<LoopSpec> loops;

    ScenarioParams scenario_params() const;
    Scenario build_scenario() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// "section.key=value" (loops: "loop:name.key=value").
void apply_override(RunConfig& cfg, const std::string& assignment);

}  // namespace epadm
