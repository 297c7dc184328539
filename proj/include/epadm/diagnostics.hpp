#pragma once

#include <functional>
#include <string>
#include <vector>

#include "epadm/dynamics.hpp"
#include "epadm/frames.hpp"

// Material-loop circulation diagnostics. Loops are closed ordered marker
// polylines advected by the fluid velocity; the circulation is the midpoint
// quadrature of the one-form m / J0 along the loop. Marker positions are
// stored unwrapped so segment vectors need no periodic-minimal search;
// interpolation reduces points into the fundamental domain.

namespace epadm {

struct MaterialLoop {
    std::string name;
    std::vector<Vec3> markers;  // unwrapped; marker N-1 connects to marker 0
    double initial_max_separation = 0.0;

    static MaterialLoop circle(const std::string& name, const Vec3& center,
                               double radius, int marker_count,
                               int plane_axis = 2);

    double max_separation() const;
    // Redistributes markers uniformly by arclength along the polyline when
    // the largest separation exceeds twice the initial one.
    bool remark_if_needed();
};

// One RK4 step of dx/dt = u(x) with the velocity field frozen in time.
MaterialLoop advect_loop(const MaterialLoop& loop, const Field& u, double dt);

// One RK4 step using the four stage velocities of the matching field step;
// keeps the marker paths at the integrator's accuracy in time.
MaterialLoop advect_loop(const MaterialLoop& loop,
                         const StageVelocities& stages, double dt);

// Midpoint quadrature of an arbitrary one-form closure along the loop.
double circulation_closure(const MaterialLoop& loop,
                           const std::function<Vec3(const Vec3&)>& one_form);

// Circulation of m / J0 interpolated from the state. Throws when J0 falls
// below the state floor at a sample point.
double circulation(const MaterialLoop& loop, const FluidState& state,
                   const AdmBackground& bg, const Eos& eos);

// Sum of |integrand . segment| along the loop; the reference scale for
// relative circulation drift (guards against near-zero initial circulation).
double circulation_abs_scale(const MaterialLoop& loop, const FluidState& state);
double circulation_abs_scale(const MaterialLoop& loop,
                             const MovingFrameState& state);

// Moving-frame circulation of m_tilde / J0_tilde along a loop advected by
// u_tilde; identical machinery, so the identity frame reproduces
// `circulation` exactly.
double circulation_moving(const MaterialLoop& loop,
                          const MovingFrameState& state,
                          const FrameMotion& frame, const AdmBackground& bg,
                          const Eos& eos);

struct ConservedReport {
    double mass = 0.0;
    std::vector<std::pair<std::string, double>> circulations;
    double hamiltonian_residual_l2 = 0.0;
    double momentum_residual_l2 = 0.0;
};

// Mass, per-loop circulation, and constraint-residual norms (the latter only
// when the background carries K and R).
ConservedReport conserved_report(const FluidState& state,
                                 const AdmBackground& bg, const Eos& eos,
                                 const std::vector<MaterialLoop>& loops);

}  // namespace epadm
