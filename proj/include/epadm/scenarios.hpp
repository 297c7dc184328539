#pragma once

#include <optional>
#include <string>
#include <vector>

#include "epadm/diagnostics.hpp"
#include "epadm/dynamics.hpp"
#include "epadm/eos.hpp"
#include "epadm/frames.hpp"
#include "epadm/geometry.hpp"

// Initial-data catalog and the linearized sound-speed reference used to
// validate the momentum equation's pressure coupling.

namespace epadm {

struct LoopSpec {
    std::string name;
    Vec3 center{0.5, 0.5, 0.0};
    double radius = 0.18;
    int markers = 256;
};

struct ScenarioParams {
    int dim = 0;  // 0: use the scenario default
    std::array<int, 3> points{0, 0, 0};
    std::array<double, 3> extent{1.0, 1.0, 1.0};
    int fd_order = 4;
    int interp_order = 3;
    std::optional<Eos> eos;

    double amplitude = 1e-4;       // acoustic perturbation
    double vortex_strength = 0.25; // peak swirl speed
    double vortex_width = 2.0;     // bump concentration
    double velocity_cap = 0.5;
    Vec3 shift{0.3, 0.0, 0.0};
    double perturbation = 0.0;     // shifted_rest swirl strength
    Vec3 frame_velocity{0.2, 0.0, 0.0};
    Vec3 advection_velocity{0.2, 0.0, 0.0};

    double t_end = -1.0;   // <0: scenario default
    double safety = 0.4;
    std::vector<LoopSpec> loops;  // empty: scenario default
};

struct Scenario {
    std::string name;
    Grid grid;
    AdmBackground bg;
    Eos eos;
    Field u0;    // Vector
    Field J0_0;  // ScalarDensity
    FrameMotion frame;
    std::vector<LoopSpec> loops;
    double t_end;
    double safety;

    FluidState initial_state() const {
        return make_fluid_state(u0, J0_0, bg, eos);
    }
    MovingFrameState initial_moving_state() const;
};

// name in {rest_state, uniform_advection, acoustic_1d, vortex_2d,
// shifted_rest, moving_frame_twin}.
Scenario make_scenario(const std::string& name, const ScenarioParams& params);

// Linearized small-amplitude signal speed about a homogeneous rest state:
// c_s^2 = n0 rho''(n0) / rho'(n0), clipped to [0, 1].
double acoustic_dispersion(const Eos& eos, double n0);

}  // namespace epadm
