#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "epadm/errors.hpp"
#include "epadm/frames.hpp"
#include "epadm/verify.hpp"

using namespace epadm;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

FrameParams default_frame_params() {
    FrameParams fp;
    fp.velocity = {0.2, 0.1, 0.0};
    fp.amplitude = 0.05;
    fp.omega = 1.3;
    Mat3 A = Mat3::identity();
    A(0, 0) = 1.15;
    A(0, 1) = 0.05;
    A(1, 0) = 0.02;
    A(1, 1) = 0.95;
    A(2, 2) = 1.05;
    fp.linear_a = A;
    Mat3 B{};
    B(0, 0) = 0.03;
    B(0, 1) = 0.01;
    B(1, 1) = -0.02;
    B(2, 2) = 0.01;
    fp.linear_b = B;
    return fp;
}

}  // namespace

TEST_CASE("frame velocity matches the time derivative of the map") {
    const FrameParams fp = default_frame_params();
    for (const char* kind : {"translation", "shear_test", "linear_test"}) {
        const FrameMotion frame = builtin_frame(kind, fp);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> unit(0.1, 0.9);
        for (int s = 0; s < 12; ++s) {
            const Vec3 x{unit(rng), unit(rng), unit(rng)};
            const double t = 0.4 + 0.3 * unit(rng);
            const double h = 1e-6;
            const Vec3 fwd_p = frame.map_at(t + h).forward(x);
            const Vec3 fwd_m = frame.map_at(t - h).forward(x);
            const Vec3 o = frame.velocity(frame.map_at(t).forward(x), t);
            for (int a = 0; a < 3; ++a) {
                const double fd = (fwd_p[a] - fwd_m[a]) / (2.0 * h);
                CHECK(std::abs(fd - o[a]) < 1e-6);
            }
        }
    }
    CHECK_THROWS_AS(builtin_frame("rotation", fp), ConfigError);
}

TEST_CASE("rho_tilde: unit-determinant identity, dust scale invariance") {
    const Eos dust = Eos::dust(1.0);
    const Eos poly = Eos::polytrope(1.0, 2.0);

    for (double n : {0.5, 1.0, 2.0}) {
        CHECK(rho_tilde(poly, 1.0, n) == doctest::Approx(poly.rho(n)));
        CHECK(pressure_tilde(poly, 1.0, n) == doctest::Approx(poly.pressure(n)));
        // Dust is scale invariant: rho_tilde = rho for any determinant.
        CHECK(rho_tilde(dust, 2.0, n) == doctest::Approx(dust.rho(n)));
    }
    // det = 2 polytrope at n = 1: rho(2)/2 = 2.
    CHECK(rho_tilde(poly, 2.0, 1.0) == doctest::Approx(2.0));
    // p_tilde = p(det n)/det.
    CHECK(pressure_tilde(poly, 2.0, 1.0) ==
          doctest::Approx(poly.pressure(2.0) / 2.0));
    CHECK_THROWS_AS(rho_tilde(poly, -1.0, 1.0), InvariantError);
}

TEST_CASE("identity frame reproduces the inertial operators bit-for-bit") {
    const Grid g = Grid::make(2, {24, 24, 1}, {1.0, 1.0, 1.0});
    BackgroundParams bp;
    const AdmBackground bg = builtin_background("gauge_lapse", bp);
    const Eos eos = Eos::linear_plus_polytrope(1.0, 0.1, 5.0 / 3.0);
    const FrameMotion id = builtin_frame("identity", {});

    std::mt19937_64 rng(11);
    const RandomFluid fluid = random_subluminal_fluid(rng, g, bg, 0.6);

    const Field m_mov = moving_dl_du(MovingEulerianFluid(fluid.u, fluid.J0),
                                     id, bg, eos, 0.0);
    const Field m_in = dl_du(EulerianFluid(fluid.u, fluid.J0), bg, eos);
    CHECK(max_abs_diff(m_mov, m_in) == 0.0);

    const Field p_mov = moving_dl_dJ0(MovingEulerianFluid(fluid.u, fluid.J0),
                                      id, bg, eos, 0.0);
    const Field p_in = dl_dJ0(EulerianFluid(fluid.u, fluid.J0), bg, eos);
    CHECK(max_abs_diff(p_mov, p_in) == 0.0);

    const MovingFrameState mstate = make_moving_state(fluid.u, fluid.J0, id, bg, eos);
    const FluidState istate = make_fluid_state(fluid.u, fluid.J0, bg, eos);
    const MovingEpRhs mr = moving_ep_rhs(mstate, id, bg, eos);
    const EpRhs ir = ep_rhs(istate, bg, eos);
    CHECK(max_abs_diff(mr.dm_dt, ir.dm_dt) == 0.0);
    CHECK(max_abs_diff(mr.dJ0_dt, ir.dJ0_dt) == 0.0);

    const auto [u_hat, j0_hat] = hat_transform(mstate, id, bg, eos);
    CHECK(max_abs_diff(j0_hat, mstate.J0_tilde) == 0.0);
    CHECK(max_abs_diff(u_hat, mr.u_tilde) == 0.0);
}

TEST_CASE("generic moving path with a zero-velocity translation matches inertial") {
    const Grid g = Grid::make(2, {16, 16, 1}, {1.0, 1.0, 1.0});
    BackgroundParams bp;
    const AdmBackground bg = builtin_background("conformal", bp);
    const Eos eos = Eos::polytrope(0.4, 5.0 / 3.0);
    FrameParams fp;
    fp.velocity = vzero();  // exercises the generic path, not the dispatch
    const FrameMotion still = builtin_frame("translation", fp);
    CHECK_FALSE(still.is_identity);

    std::mt19937_64 rng(5);
    const RandomFluid fluid = random_subluminal_fluid(rng, g, bg, 0.5);
    const Field m_mov = moving_dl_du(MovingEulerianFluid(fluid.u, fluid.J0),
                                     still, bg, eos, 0.3);
    const Field m_in = dl_du(EulerianFluid(fluid.u, fluid.J0), bg, eos);
    CHECK(max_abs_diff(m_mov, m_in) < 1e-14);
}

TEST_CASE("translation frame with flat space: momentum is the shifted inertial one") {
    // With O_t(x) = x + c t and beta = 0, the perceived momentum at x equals
    // the inertial momentum evaluated with velocity u_tilde + c at O_t(x).
    BackgroundParams bp;
    bp.amplitude = 0.08;
    const AdmBackground bg = builtin_background("gauge_lapse", bp);
    const Eos eos = Eos::linear_plus_polytrope(1.0, 0.1, 5.0 / 3.0);
    const FrameParams fp = default_frame_params();
    const FrameMotion frame = builtin_frame("translation", fp);
    const double t = 0.7;

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int s = 0; s < 16; ++s) {
        const Vec3 x{unit(rng), unit(rng), unit(rng)};
        const Vec3 u_tilde{0.2 * unit(rng), -0.1 * unit(rng), 0.0};
        const double j0 = 0.8 + 0.4 * unit(rng);

        const MovingLocal ml = moving_local(frame, bg, x, t);
        const Vec3 m_mov = local_moving_dl_du(ml, eos, u_tilde, j0);

        const Vec3 v = u_tilde + fp.velocity;
        const LocalGeom lg_shifted = local_geom(bg, ml.y);
        const Vec3 m_in = local_dl_du(lg_shifted, eos, v, j0);
        for (int a = 0; a < 3; ++a) {
            CHECK(m_mov[a] == doctest::Approx(m_in[a]).epsilon(1e-13));
        }
    }
}

TEST_CASE("moving recovery round trip across frames and backgrounds") {
    const Grid g = Grid::make(2, {16, 16, 1}, {1.0, 1.0, 1.0});
    const FrameParams fp = default_frame_params();
    const double t = 0.6;
    std::mt19937_64 rng(31);

    for (const char* kind : {"translation", "shear_test", "linear_test"}) {
        const FrameMotion frame = builtin_frame(kind, fp);
        for (const char* bg_name : {"minkowski", "conformal"}) {
            BackgroundParams bp;
            const AdmBackground bg = builtin_background(bg_name, bp);
            const Eos eos = Eos::linear_plus_polytrope(1.0, 0.1, 5.0 / 3.0);
            const RandomFluid fluid =
                random_subluminal_moving_fluid(rng, g, bg, frame, t, 0.8);
            MovingFrameState state = make_moving_state(fluid.u, fluid.J0,
                                                       frame, bg, eos, t);
            const Field u_rec = moving_velocity_recovery(state, frame, bg, eos);
            INFO(kind, " on ", bg_name);
            CHECK(max_abs_diff(u_rec, fluid.u) < 1e-10);
        }
    }
}

TEST_CASE("hat transform under a commensurate translation is a rigid shift") {
    const Grid g = Grid::make(1, {32, 1, 1}, {1.0, 1.0, 1.0});
    BackgroundParams bp;
    const AdmBackground mink = builtin_background("minkowski", bp);
    const Eos eos = Eos::linear_plus_polytrope(1.0, 0.1, 5.0 / 3.0);
    FrameParams fp;
    fp.velocity = {0.25, 0.0, 0.0};
    const FrameMotion frame = builtin_frame("translation", fp);
    const double t = 1.0;  // offset 0.25 = 8 cells, node-exact

    Field u(g, FieldKind::Vector), j0(g, FieldKind::ScalarDensity);
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        const double x = g.node_point(n)[0];
        u(n, 0) = 0.1 * std::sin(kTwoPi * x);
        j0(n) = 1.0 + 0.2 * std::cos(kTwoPi * x);
    }
    MovingFrameState state = make_moving_state(u, j0, frame, mink, eos, t);
    const auto [u_hat, j0_hat] = hat_transform(state, frame, mink, eos);
    double err = 0.0;
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        const double x = g.node_point(n)[0];
        err = std::max(err, std::abs(u_hat(n, 0) -
                                     0.1 * std::sin(kTwoPi * (x - 0.25))));
        err = std::max(err, std::abs(j0_hat(n) -
                                     (1.0 + 0.2 * std::cos(kTwoPi * (x - 0.25)))));
    }
    CHECK(err < 1e-10);
}

TEST_CASE("co-moving homogeneous state is exactly stationary") {
    const Grid g = Grid::make(1, {64, 1, 1}, {1.0, 1.0, 1.0});
    BackgroundParams bp;
    const AdmBackground mink = builtin_background("minkowski", bp);
    const Eos dust = Eos::dust(1.0);
    FrameParams fp;
    fp.velocity = {0.3, 0.0, 0.0};
    const FrameMotion frame = builtin_frame("translation", fp);

    // Perceived description of a uniformly drifting fluid: u_tilde = 0.
    Field u(g, FieldKind::Vector), j0(g, FieldKind::ScalarDensity);
    j0.fill(1.0);
    MovingFrameState state = make_moving_state(u, j0, frame, mink, dust, 0.0);
    const MovingFrameState next =
        moving_rk4_step(state, frame, mink, dust, 0.01);
    CHECK(max_abs_diff(next.m_tilde, state.m_tilde) == 0.0);
    CHECK(max_abs_diff(next.J0_tilde, state.J0_tilde) == 0.0);
}

TEST_CASE("translation-frame twin run tracks the inertial run") {
    // Short acoustic twin run; the acceptance suite runs the full version.
    const Grid g = Grid::make(1, {64, 1, 1}, {1.0, 1.0, 1.0});
    BackgroundParams bp;
    const AdmBackground mink = builtin_background("minkowski", bp);
    const Eos eos = Eos::linear_plus_polytrope(1.0, 0.1, 5.0 / 3.0);
    FrameParams fp;
    fp.velocity = {0.2, 0.0, 0.0};
    const FrameMotion frame = builtin_frame("translation", fp);

    const double cs = std::sqrt(eos.sound_speed_sq(1.0));
    Field u(g, FieldKind::Vector), j0(g, FieldKind::ScalarDensity);
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        const double dj = 1e-4 * std::sin(kTwoPi * g.node_point(n)[0]);
        j0(n) = 1.0 + dj;
        u(n, 0) = cs * dj;
    }
    FluidState inertial = make_fluid_state(u, j0, mink, eos);
    Field u_tilde = u;
    for (std::size_t n = 0; n < g.num_nodes(); ++n) u_tilde(n, 0) -= 0.2;
    MovingFrameState moving = make_moving_state(u_tilde, j0, frame, mink, eos);

    const double dt = 0.005;
    for (int s = 0; s < 20; ++s) {
        inertial = rk4_step(inertial, mink, eos, dt);
        moving = moving_rk4_step(moving, frame, mink, eos, dt);
    }
    const FrameCompareReport rep =
        frame_equivalence_check(inertial, moving, frame, mink, eos);
    CHECK(rep.max_du < 1e-8);
    CHECK(rep.max_dJ0 < 1e-8);

    // Mismatched times are rejected.
    MovingFrameState stale = moving;
    stale.t += dt;
    CHECK_THROWS_AS(frame_equivalence_check(inertial, stale, frame, mink, eos),
                    ConfigError);
}
