#pragma once

#include <functional>
#include <string>
#include <utility>

#include "epadm/dynamics.hpp"
#include "epadm/eos.hpp"
#include "epadm/geometry.hpp"
#include "epadm/kinematics.hpp"

// Moving-frame description: a time-indexed spatial diffeomorphism O_t
// re-expresses the fluid variables relative to an observer. The perceived
// state (m_tilde, J0_tilde) obeys the same momentum/advection structure with
// transported variational derivatives; background data is evaluated at
// O_t(x) through the analytic closures, never by grid resampling.
//
// With w = beta + o + (DO) u_tilde and n = J0_tilde sqrt(alpha^2 - |w|^2)
// (all metric data at O_t(x)):
//
//   dl/du_tilde_a = vol rho'(n) J0_tilde^2 / n * gamma_cb w^b J^c_a
//   dl/dJ0_tilde  = -vol rho'(n) n / J0_tilde
//
// These match finite differences of the transported discrete Lagrangian
//   l = -sum vol(O(x)) rho(n(x)) h^D
// and reduce to the inertial forms for the identity frame.

namespace epadm {

struct FrameMotion {
    std::string kind = "identity";
    bool is_identity = true;
    std::function<SpatialMap(double)> map_at;
    // Frame velocity o(x, t) at the image point: o(O_t(x), t) = dO_t(x)/dt.
    std::function<Vec3(const Vec3&, double)> velocity;
};

struct FrameParams {
    std::array<double, 3> extent{1.0, 1.0, 1.0};
    Vec3 velocity{0.0, 0.0, 0.0};   // translation
    double amplitude = 0.02;        // shear_test
    double omega = 1.0;             // shear_test time frequency
    Mat3 linear_a = Mat3::identity();  // linear_test: O_t = (A + t B) x
    Mat3 linear_b{};
};

// kind in {identity, translation, shear_test, linear_test}. The first three
// are periodic-compatible; linear_test is a non-periodic patch used only by
// pointwise verification.
FrameMotion builtin_frame(const std::string& kind, const FrameParams& params);

struct MovingFrameState {
    Field m_tilde;   // OneFormDensity, dl/du_tilde
    Field J0_tilde;  // ScalarDensity
    double t = 0.0;
    double j0_floor = 0.0;

    MovingFrameState(Field m_in, Field j0_in, double time, double floor);
    void apply_floor();
};

// Perceived Eulerian data before conversion to the evolved momentum.
struct MovingEulerianFluid {
    Field u_tilde;
    Field J0_tilde;

    MovingEulerianFluid(Field u_in, Field j0_in);
};

// Pointwise frame data at one label point.
struct MovingLocal {
    Vec3 y;        // O_t(x)
    Mat3 jac;      // DO_t(x)
    double det;    // det DO_t(x) > 0
    Vec3 o;        // o(y, t)
    LocalGeom lg;  // metric data at y
};
MovingLocal moving_local(const FrameMotion& frame, const AdmBackground& bg,
                         const Vec3& x, double t);

// Transformed energy density rho_tilde(n) = rho(det n) / det, with
// derivative rho'(det n) and pressure p_tilde(n) = p(det n)/det.
double rho_tilde(const Eos& eos, double det, double n);
double drho_tilde_dn(const Eos& eos, double det, double n);
double pressure_tilde(const Eos& eos, double det, double n);

Vec3 local_moving_dl_du(const MovingLocal& ml, const Eos& eos,
                        const Vec3& u_tilde, double j0_tilde);
double local_moving_dl_dJ0(const MovingLocal& ml, const Eos& eos,
                           const Vec3& u_tilde, double j0_tilde);

// Transported integrand -vol(O(x)) rho(n(x)); the moving discrete Lagrangian
// is its cell-volume-weighted node sum, and the moving variational
// derivatives above are its exact partials.
double local_moving_lagrangian_density(const MovingLocal& ml, const Eos& eos,
                                       const Vec3& u_tilde, double j0_tilde);

Field moving_dl_du(const MovingEulerianFluid& fluid, const FrameMotion& frame,
                   const AdmBackground& bg, const Eos& eos, double t);
Field moving_dl_dJ0(const MovingEulerianFluid& fluid, const FrameMotion& frame,
                    const AdmBackground& bg, const Eos& eos, double t);

// Pushed-forward observables: u_hat = O_* u_tilde, J0_hat = (O^{-1})* J0_tilde,
// with u_tilde recovered from the evolved momentum first.
std::pair<Field, Field> hat_transform(const MovingFrameState& state,
                                      const FrameMotion& frame,
                                      const AdmBackground& bg, const Eos& eos);

// Momentum inversion in the moving frame: the same scalar solve applied to
// the rotated momentum (DO)^{-T} m_tilde with beta + o in place of beta,
// followed by the frame pull-back of the velocity.
Field moving_velocity_recovery(const MovingFrameState& state,
                               const FrameMotion& frame,
                               const AdmBackground& bg, const Eos& eos);

struct MovingEpRhs {
    Field dm_dt;
    Field dJ0_dt;
    Field u_tilde;
};
MovingEpRhs moving_ep_rhs(const MovingFrameState& state,
                          const FrameMotion& frame, const AdmBackground& bg,
                          const Eos& eos, const DynamicsOptions& opts = {});

MovingFrameState moving_rk4_step(const MovingFrameState& state,
                                 const FrameMotion& frame,
                                 const AdmBackground& bg, const Eos& eos,
                                 double dt, const DynamicsOptions& opts = {},
                                 StageVelocities* stages = nullptr);

MovingFrameState make_moving_state(const Field& u_tilde, const Field& J0_tilde,
                                   const FrameMotion& frame,
                                   const AdmBackground& bg, const Eos& eos,
                                   double t = 0.0);

// Twin-run comparison for translation frames O_t(x) = x + c t:
// u(x) ?= c + u_tilde(x - c t) and J0(x) ?= J0_tilde(x - c t).
struct FrameCompareReport {
    double max_du = 0.0;
    double max_dJ0 = 0.0;
};
FrameCompareReport frame_equivalence_check(const FluidState& inertial,
                                           const MovingFrameState& moving,
                                           const FrameMotion& frame,
                                           const AdmBackground& bg,
                                           const Eos& eos);

}  // namespace epadm
