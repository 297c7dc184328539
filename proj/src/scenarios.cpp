#include "epadm/scenarios.hpp"

#include <cmath>

#include "epadm/errors.hpp"

namespace epadm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Grid scenario_grid(const ScenarioParams& p, int default_dim, int default_pts) {
    const int dim = p.dim > 0 ? p.dim : default_dim;
    std::array<int, 3> pts = p.points;
    for (int a = 0; a < 3; ++a) {
        if (pts[a] <= 0) pts[a] = default_pts;
    }
    return Grid::make(dim, pts, p.extent, p.fd_order, p.interp_order);
}

Field uniform_density(const Grid& g, double value) {
    Field j0(g, FieldKind::ScalarDensity);
    j0.fill(value);
    return j0;
}

}  // namespace

MovingFrameState Scenario::initial_moving_state() const {
    // The bundled frames satisfy O_0 = id, so the perceived initial data is
    // u_tilde = u - o and J0_tilde = J0.
    Field u_tilde = u0;
    const Grid& g = u0.grid();
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        const Vec3 o = frame.velocity(g.node_point(n), 0.0);
        for (int a = 0; a < g.dim(); ++a) {
            u_tilde(n, a) -= o[a];
        }
    }
    return make_moving_state(u_tilde, J0_0, frame, bg, eos, 0.0);
}

double acoustic_dispersion(const Eos& eos, double n0) {
    if (!(n0 > 0.0)) throw ConfigError("acoustic_dispersion: n0 must be positive");
    return std::sqrt(eos.sound_speed_sq(n0));
}

Scenario make_scenario(const std::string& name, const ScenarioParams& p) {
    BackgroundParams bp;
    bp.extent = p.extent;

    if (name == "rest_state") {
        Grid g = scenario_grid(p, 2, 32);
        Scenario s{name,
                   g,
                   builtin_background("minkowski", bp),
                   p.eos.value_or(Eos::dust(1.0)),
                   Field(g, FieldKind::Vector),
                   uniform_density(g, 1.0),
                   builtin_frame("identity", {}),
                   p.loops,
                   p.t_end > 0 ? p.t_end : 1.0,
                   p.safety};
        return s;
    }

    if (name == "uniform_advection") {
        Grid g = scenario_grid(p, 1, 128);
        Field u(g, FieldKind::Vector);
        for (std::size_t n = 0; n < g.num_nodes(); ++n) {
            u.set_vec(n, p.advection_velocity);
        }
        Scenario s{name,
                   g,
                   builtin_background("minkowski", bp),
                   p.eos.value_or(Eos::dust(1.0)),
                   std::move(u),
                   uniform_density(g, 1.0),
                   builtin_frame("identity", {}),
                   p.loops,
                   p.t_end > 0 ? p.t_end : 1.0,
                   p.safety};
        return s;
    }

    if (name == "acoustic_1d" || name == "moving_frame_twin") {
        Grid g = scenario_grid(p, 1, name == "acoustic_1d" ? 256 : 128);
        const Eos eos = p.eos.value_or(Eos::linear_plus_polytrope(1.0, 0.1, 5.0 / 3.0));
        const double n0 = 1.0;
        const double cs = acoustic_dispersion(eos, n0);
        const double k = kTwoPi / g.extent(0);
        Field u(g, FieldKind::Vector);
        Field j0(g, FieldKind::ScalarDensity);
        // Right-moving linear mode: dJ0 = A sin(kx), du = (cs/n0) dJ0.
        for (std::size_t n = 0; n < g.num_nodes(); ++n) {
            const double x = g.node_point(n)[0];
            const double dj = p.amplitude * std::sin(k * x);
            j0(n) = n0 + dj;
            u(n, 0) = cs * dj / n0;
        }
        FrameMotion frame = builtin_frame("identity", {});
        if (name == "moving_frame_twin") {
            FrameParams fp;
            fp.extent = p.extent;
            fp.velocity = p.frame_velocity;
            frame = builtin_frame("translation", fp);
        }
        Scenario s{name,
                   g,
                   builtin_background("minkowski", bp),
                   eos,
                   std::move(u),
                   std::move(j0),
                   std::move(frame),
                   p.loops,
                   p.t_end > 0 ? p.t_end : 1.0,
                   p.safety};
        return s;
    }

    if (name == "vortex_2d" || name == "shifted_rest") {
        const bool shifted = (name == "shifted_rest");
        Grid g = scenario_grid(p, 2, shifted ? 64 : 128);
        if (g.dim() < 2) {
            throw ConfigError(name + ": needs a 2-D or 3-D grid");
        }
        AdmBackground bg =
            shifted ? builtin_background("shift_wind",
                                         [&] {
                                             BackgroundParams b = bp;
                                             b.shift = p.shift;
                                             return b;
                                         }())
                    : builtin_background("minkowski", bp);
        const Eos eos = p.eos.value_or(Eos::polytrope(0.1, 4.0 / 3.0));

        const double strength = shifted ? p.perturbation : p.vortex_strength;
        if (strength > p.velocity_cap) {
            throw ConfigError(name + ": swirl speed exceeds the velocity cap");
        }
        const double kx = kTwoPi / g.extent(0);
        const double ky = kTwoPi / g.extent(1);
        const Vec3 center{0.5 * g.extent(0), 0.5 * g.extent(1), 0.0};
        const double kappa = p.vortex_width;

        // Periodic bump stream function; swirl = (-d_y psi, d_x psi).
        const auto swirl_raw = [&](const Vec3& q) {
            const double cx = std::cos(kx * (q[0] - center[0]));
            const double cy = std::cos(ky * (q[1] - center[1]));
            const double s = std::exp(kappa * (cx + cy - 2.0));
            const double dsx = -s * kappa * kx * std::sin(kx * (q[0] - center[0]));
            const double dsy = -s * kappa * ky * std::sin(ky * (q[1] - center[1]));
            return Vec3{-dsy, dsx, 0.0};
        };
        double peak = 0.0;
        for (std::size_t n = 0; n < g.num_nodes(); ++n) {
            const Vec3 v = swirl_raw(g.node_point(n));
            peak = std::max(peak, std::sqrt(dot(v, v)));
        }
        const double scale = (peak > 0.0 && strength > 0.0) ? strength / peak : 0.0;

        Field u(g, FieldKind::Vector);
        for (std::size_t n = 0; n < g.num_nodes(); ++n) {
            const Vec3 x = g.node_point(n);
            Vec3 v = scale * swirl_raw(x);
            if (shifted) v = v - bg.beta(x);
            u.set_vec(n, v);
        }

        std::vector<LoopSpec> loops = p.loops;
        if (loops.empty()) {
            LoopSpec core;
            core.name = "core";
            core.center = center;
            core.radius = 0.18 * g.extent(0);
            core.markers = 256;
            loops.push_back(core);
        }
        Scenario s{name,
                   g,
                   std::move(bg),
                   eos,
                   std::move(u),
                   uniform_density(g, 1.0),
                   builtin_frame("identity", {}),
                   std::move(loops),
                   p.t_end > 0 ? p.t_end : 3.0,
                   p.safety};
        return s;
    }

    throw ConfigError("make_scenario: unknown scenario '" + name + "'");
}

}  // namespace epadm
