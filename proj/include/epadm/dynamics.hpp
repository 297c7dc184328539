#pragma once

#include "epadm/eos.hpp"
#include "epadm/geometry.hpp"
#include "epadm/grid.hpp"
#include "epadm/lagrangian.hpp"

// Time integration of the momentum/advection system for the state
// (m, J0) with m = dl/du:
//
//   d m / dt  = -L_u m + J0 d_a(dl/dJ0)
//   d J0 / dt = -d_a(J0 u^a)
//
// u is recovered pointwise from m by inverting the momentum relation.
// The state is closed under this right-hand side; the fluid map itself is
// never needed.

namespace epadm {

struct FluidState {
    Field m;   // OneFormDensity
    Field J0;  // ScalarDensity
    double t = 0.0;
    double j0_floor = 0.0;

    FluidState(Field m_in, Field j0_in, double time, double floor);
    void apply_floor();
};

// Builds the evolved state from user-facing initial data (u, J0); the floor
// defaults to 1e-12 times the mean initial J0.
FluidState make_fluid_state(const Field& u, const Field& J0,
                            const AdmBackground& bg, const Eos& eos,
                            double t = 0.0);

struct DynamicsOptions {
    bool hyperdissipation = false;  // -nu lap(lap(.)) on m and J0
    double nu = 0.0;
};

// Pointwise inversion of the momentum relation. At each node the rescaled
// momentum gamma^{ab} m_b is parallel to v = beta + u, reducing to a scalar
// root-find for s = |v|_gamma in [0, alpha); safeguarded Newton with a
// bisection fallback, relative tolerance 1e-13, at most 100 iterations.
// m = 0 returns u = -beta. Throws InvariantError when no subluminal root
// exists (superluminal momentum) or the iteration stalls.
Field velocity_recovery(const FluidState& state, const AdmBackground& bg,
                        const Eos& eos);

// Scalar kernel behind velocity_recovery, exposed for the moving-frame
// solver and the verification suites: solves
//   vol * rho'(n(s)) * J0^2 * s / n(s) = m_norm,  n(s) = J0 sqrt(alpha^2-s^2)
double recover_speed(double m_norm, double J0, double alpha, double vol,
                     const Eos& eos);

// (L_u m)_a = d_b(u^b m_a) + m_b d_a u^b  on one-form densities.
Field lie_derivative_oneform_density(const Field& u, const Field& m);

// L_u d = d_a(d u^a); flux form, so the total integral is conserved.
Field lie_derivative_density(const Field& u, const Field& d);

struct EpRhs {
    Field dm_dt;   // OneFormDensity
    Field dJ0_dt;  // ScalarDensity
    Field u;       // recovered velocity (Vector)
};

EpRhs ep_rhs(const FluidState& state, const AdmBackground& bg, const Eos& eos,
             const DynamicsOptions& opts = {});

// Velocities at the four classical Runge-Kutta stages, reusable for marker
// advection within the same step.
struct StageVelocities {
    std::vector<Field> u;
};

// Classical RK4 on (m, J0). The updated state is validated by running the
// velocity recovery; a failure rejects the step with a diagnostic.
FluidState rk4_step(const FluidState& state, const AdmBackground& bg,
                    const Eos& eos, double dt, const DynamicsOptions& opts = {},
                    StageVelocities* stages = nullptr);

// dt = safety * min over nodes and axes of
//        spacing_a / (|u^a| + |beta^a| + c_s alpha / sqrt(gamma_aa)),
// with c_s^2 = n rho''/rho' clipped to [0,1]. Axes with vanishing signal
// speed contribute spacing_a (unit-speed cap).
double cfl_dt(const FluidState& state, const AdmBackground& bg, const Eos& eos,
              double safety);

}  // namespace epadm
