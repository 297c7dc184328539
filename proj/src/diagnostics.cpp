#include "epadm/diagnostics.hpp"

#include <cmath>

#include "epadm/errors.hpp"
#include "epadm/lagrangian.hpp"

namespace epadm {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

MaterialLoop MaterialLoop::circle(const std::string& name, const Vec3& center,
                                  double radius, int marker_count,
                                  int plane_axis) {
    if (marker_count < 16) {
        throw ConfigError("MaterialLoop: need at least 16 markers");
    }
    const int a = (plane_axis + 1) % 3;
    const int b = (plane_axis + 2) % 3;
    MaterialLoop loop;
    loop.name = name;
    loop.markers.resize(marker_count);
    for (int k = 0; k < marker_count; ++k) {
        const double phi = kTwoPi * k / marker_count;
        Vec3 p = center;
        p[a] += radius * std::cos(phi);
        p[b] += radius * std::sin(phi);
        loop.markers[k] = p;
    }
    loop.initial_max_separation = loop.max_separation();
    return loop;
}

double MaterialLoop::max_separation() const {
    double m = 0.0;
    const std::size_t n = markers.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Vec3 d = markers[(k + 1) % n] - markers[k];
        m = std::max(m, std::sqrt(dot(d, d)));
    }
    return m;
}

bool MaterialLoop::remark_if_needed() {
    if (initial_max_separation <= 0.0) return false;
    if (max_separation() <= 2.0 * initial_max_separation) return false;

    // Cumulative arclength of the closed polyline.
    const std::size_t n = markers.size();
    std::vector<double> arclen(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const Vec3 d = markers[(k + 1) % n] - markers[k];
        arclen[k + 1] = arclen[k] + std::sqrt(dot(d, d));
    }
    const double total = arclen[n];
    std::vector<Vec3> fresh(n);
    std::size_t seg = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double target = total * k / n;
        while (seg + 1 < n && arclen[seg + 1] < target) ++seg;
        const double seg_len = arclen[seg + 1] - arclen[seg];
        const double t = seg_len > 0.0 ? (target - arclen[seg]) / seg_len : 0.0;
        const Vec3 p0 = markers[seg];
        const Vec3 p1 = markers[(seg + 1) % n];
        fresh[k] = p0 + t * (p1 - p0);
    }
    markers = std::move(fresh);
    initial_max_separation = max_separation();
    return true;
}

MaterialLoop advect_loop(const MaterialLoop& loop, const Field& u, double dt) {
    MaterialLoop out = loop;
    for (Vec3& x : out.markers) {
        const Vec3 k1 = interpolate_vec(u, x);
        const Vec3 k2 = interpolate_vec(u, x + (0.5 * dt) * k1);
        const Vec3 k3 = interpolate_vec(u, x + (0.5 * dt) * k2);
        const Vec3 k4 = interpolate_vec(u, x + dt * k3);
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return out;
}

MaterialLoop advect_loop(const MaterialLoop& loop,
                         const StageVelocities& stages, double dt) {
    if (stages.u.size() != 4) {
        throw ConfigError("advect_loop: need all four stage velocities");
    }
    MaterialLoop out = loop;
    for (Vec3& x : out.markers) {
        const Vec3 k1 = interpolate_vec(stages.u[0], x);
        const Vec3 k2 = interpolate_vec(stages.u[1], x + (0.5 * dt) * k1);
        const Vec3 k3 = interpolate_vec(stages.u[2], x + (0.5 * dt) * k2);
        const Vec3 k4 = interpolate_vec(stages.u[3], x + dt * k3);
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return out;
}

double circulation_closure(const MaterialLoop& loop,
                           const std::function<Vec3(const Vec3&)>& one_form) {
    // Midpoint rule per segment; compensated fixed-order accumulation.
    double sum = 0.0, comp = 0.0;
    const std::size_t n = loop.markers.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Vec3& p0 = loop.markers[k];
        const Vec3& p1 = loop.markers[(k + 1) % n];
        const Vec3 mid = 0.5 * (p0 + p1);
        const Vec3 seg = p1 - p0;
        const double contrib = dot(one_form(mid), seg);
        const double y = contrib - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

namespace {

std::function<Vec3(const Vec3&)> momentum_per_density(const Field& m,
                                                      const Field& j0,
                                                      double floor,
                                                      const std::string& what) {
    return [&m, &j0, floor, what](const Vec3& x) {
        const double dens = interpolate_scalar(j0, x);
        if (dens < floor || !(dens > 0.0)) {
            throw InvariantError(what + ": J0 below floor along loop");
        }
        return (1.0 / dens) * interpolate_vec(m, x);
    };
}

}  // namespace

double circulation(const MaterialLoop& loop, const FluidState& state,
                   const AdmBackground&, const Eos&) {
    return circulation_closure(
        loop, momentum_per_density(state.m, state.J0, state.j0_floor,
                                   "circulation"));
}

namespace {

double abs_scale(const MaterialLoop& loop,
                 const std::function<Vec3(const Vec3&)>& one_form) {
    double sum = 0.0;
    const std::size_t n = loop.markers.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Vec3& p0 = loop.markers[k];
        const Vec3& p1 = loop.markers[(k + 1) % n];
        sum += std::abs(dot(one_form(0.5 * (p0 + p1)), p1 - p0));
    }
    return sum;
}

}  // namespace

double circulation_abs_scale(const MaterialLoop& loop,
                             const FluidState& state) {
    return abs_scale(loop, momentum_per_density(state.m, state.J0,
                                                state.j0_floor,
                                                "circulation_abs_scale"));
}

double circulation_abs_scale(const MaterialLoop& loop,
                             const MovingFrameState& state) {
    return abs_scale(loop, momentum_per_density(state.m_tilde, state.J0_tilde,
                                                state.j0_floor,
                                                "circulation_abs_scale"));
}

double circulation_moving(const MaterialLoop& loop,
                          const MovingFrameState& state, const FrameMotion&,
                          const AdmBackground&, const Eos&) {
    return circulation_closure(
        loop, momentum_per_density(state.m_tilde, state.J0_tilde,
                                   state.j0_floor, "circulation_moving"));
}

ConservedReport conserved_report(const FluidState& state,
                                 const AdmBackground& bg, const Eos& eos,
                                 const std::vector<MaterialLoop>& loops) {
    ConservedReport report;
    report.mass = integrate(state.J0);
    for (const MaterialLoop& loop : loops) {
        report.circulations.emplace_back(loop.name,
                                         circulation(loop, state, bg, eos));
    }
    if (bg.has_curvature_data()) {
        const Field u = velocity_recovery(state, bg, eos);
        const ConstraintResiduals res =
            constraint_residuals(EulerianFluid(u, state.J0), bg, eos);
        report.hamiltonian_residual_l2 = l2_norm(res.hamiltonian);
        report.momentum_residual_l2 = l2_norm(res.momentum);
    }
    return report;
}

}  // namespace epadm
