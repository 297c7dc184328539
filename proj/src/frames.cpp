#include "epadm/frames.hpp"

#include <cmath>
#include <sstream>

#include "epadm/errors.hpp"
#include "epadm/parallel.hpp"

namespace epadm {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

FrameMotion builtin_frame(const std::string& kind, const FrameParams& params) {
    FrameMotion frame;
    frame.kind = kind;

    if (kind == "identity") {
        frame.is_identity = true;
        frame.map_at = [](double) { return builtin_map("identity", {}, 0.0); };
        frame.velocity = [](const Vec3&, double) { return vzero(); };
        return frame;
    }
    frame.is_identity = false;

    if (kind == "translation") {
        const Vec3 c = params.velocity;
        frame.map_at = [c](double t) {
            MapParams mp;
            mp.velocity = c;
            return builtin_map("translation", mp, t);
        };
        frame.velocity = [c](const Vec3&, double) { return c; };
        return frame;
    }

    if (kind == "shear_test") {
        // O_t(x) = (x + eps sin(omega t) sin(2 pi y / L), y, z); unit
        // determinant, exactly invertible, periodic-compatible.
        const double eps = params.amplitude;
        const double omega = params.omega;
        const double ky = kTwoPi / params.extent[1];
        frame.map_at = [eps, omega, ky](double t) {
            const double a = eps * std::sin(omega * t);
            SpatialMap map;
            map.name = "shear_test";
            map.forward = [a, ky](const Vec3& x) {
                return Vec3{x[0] + a * std::sin(ky * x[1]), x[1], x[2]};
            };
            map.inverse = [a, ky](const Vec3& y) {
                return Vec3{y[0] - a * std::sin(ky * y[1]), y[1], y[2]};
            };
            map.jacobian = [a, ky](const Vec3& x) {
                Mat3 j = Mat3::identity();
                j(0, 1) = a * ky * std::cos(ky * x[1]);
                return j;
            };
            map.time_derivative = [eps, omega, ky, t](const Vec3& x) {
                return Vec3{eps * omega * std::cos(omega * t) *
                                std::sin(ky * x[1]),
                            0.0, 0.0};
            };
            return map;
        };
        // y is preserved, so the image-point velocity has the same form.
        frame.velocity = [eps, omega, ky](const Vec3& y, double t) {
            return Vec3{eps * omega * std::cos(omega * t) * std::sin(ky * y[1]),
                        0.0, 0.0};
        };
        return frame;
    }

    if (kind == "linear_test") {
        // O_t(x) = (A + t B) x on a non-periodic patch; exercises
        // non-unit Jacobian determinants in pointwise checks.
        const Mat3 A = params.linear_a;
        const Mat3 B = params.linear_b;
        frame.map_at = [A, B](double t) {
            Mat3 M = A;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) M(r, c) += t * B(r, c);
            const Mat3 Minv = mat_inverse(M);
            SpatialMap map;
            map.name = "linear_test";
            map.forward = [M](const Vec3& x) { return matvec(M, x); };
            map.inverse = [Minv](const Vec3& y) { return matvec(Minv, y); };
            map.jacobian = [M](const Vec3&) { return M; };
            map.time_derivative = [B](const Vec3& x) { return matvec(B, x); };
            return map;
        };
        frame.velocity = [A, B](const Vec3& y, double t) {
            Mat3 M = A;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) M(r, c) += t * B(r, c);
            return matvec(B, matvec(mat_inverse(M), y));
        };
        return frame;
    }

    throw ConfigError("builtin_frame: unknown kind '" + kind + "'");
}

MovingFrameState::MovingFrameState(Field m_in, Field j0_in, double time,
                                   double floor)
    : m_tilde(std::move(m_in)),
      J0_tilde(std::move(j0_in)),
      t(time),
      j0_floor(floor) {
    if (!m_tilde.grid().same_shape(J0_tilde.grid())) {
        throw ConfigError("MovingFrameState: grids differ");
    }
}

void MovingFrameState::apply_floor() {
    for (std::size_t n = 0; n < J0_tilde.num_nodes(); ++n) {
        if (J0_tilde(n) < j0_floor) J0_tilde(n) = j0_floor;
    }
}

MovingEulerianFluid::MovingEulerianFluid(Field u_in, Field j0_in)
    : u_tilde(std::move(u_in)), J0_tilde(std::move(j0_in)) {
    if (!u_tilde.grid().same_shape(J0_tilde.grid())) {
        throw ConfigError("MovingEulerianFluid: grids differ");
    }
}

MovingLocal moving_local(const FrameMotion& frame, const AdmBackground& bg,
                         const Vec3& x, double t) {
    const SpatialMap map = frame.map_at(t);
    MovingLocal ml;
    ml.y = map.forward(x);
    ml.jac = map.jacobian(x);
    ml.det = mat_det(ml.jac);
    if (!(ml.det > 0.0)) {
        throw InvariantError("moving_local: frame Jacobian not orientation preserving");
    }
    ml.o = frame.velocity(ml.y, t);
    ml.lg = local_geom(bg, ml.y);
    return ml;
}

double rho_tilde(const Eos& eos, double det, double n) {
    if (!(det > 0.0)) {
        throw InvariantError("rho_tilde: non-positive Jacobian determinant");
    }
    return eos.rho(det * n) / det;
}

double drho_tilde_dn(const Eos& eos, double det, double n) {
    if (!(det > 0.0)) {
        throw InvariantError("drho_tilde_dn: non-positive Jacobian determinant");
    }
    return eos.drho_dn(det * n);
}

double pressure_tilde(const Eos& eos, double det, double n) {
    return n * drho_tilde_dn(eos, det, n) - rho_tilde(eos, det, n);
}

namespace {

// Shared kernel: w = beta + o + J u_tilde and n at the image point.
struct MovingKinematics {
    Vec3 w;
    double n;
};

MovingKinematics moving_kinematics(const MovingLocal& ml, const Vec3& u_tilde,
                                   double j0_tilde) {
    MovingKinematics mk;
    mk.w = ml.lg.beta + ml.o + matvec(ml.jac, u_tilde);
    const double disc =
        ml.lg.alpha * ml.lg.alpha - sym_quad(ml.lg.gamma, mk.w, mk.w);
    if (!(disc > 0.0)) {
        std::ostringstream os;
        os << "moving frame: subluminal bound violated, alpha^2 - |beta+o+u_hat|^2 = "
           << disc;
        throw InvariantError(os.str());
    }
    mk.n = j0_tilde * std::sqrt(disc);
    return mk;
}

}  // namespace

Vec3 local_moving_dl_du(const MovingLocal& ml, const Eos& eos,
                        const Vec3& u_tilde, double j0_tilde) {
    const MovingKinematics mk = moving_kinematics(ml, u_tilde, j0_tilde);
    const double coef =
        ml.lg.vol * eos.drho_dn(mk.n) * j0_tilde * j0_tilde / mk.n;
    const Vec3 w_low = sym_matvec(ml.lg.gamma, mk.w);
    return coef * matvec_transpose(ml.jac, w_low);
}

double local_moving_dl_dJ0(const MovingLocal& ml, const Eos& eos,
                           const Vec3& u_tilde, double j0_tilde) {
    const MovingKinematics mk = moving_kinematics(ml, u_tilde, j0_tilde);
    return -ml.lg.vol * eos.drho_dn(mk.n) * mk.n / j0_tilde;
}

double local_moving_lagrangian_density(const MovingLocal& ml, const Eos& eos,
                                       const Vec3& u_tilde, double j0_tilde) {
    const MovingKinematics mk = moving_kinematics(ml, u_tilde, j0_tilde);
    return -ml.lg.vol * eos.rho(mk.n);
}

Field moving_dl_du(const MovingEulerianFluid& fluid, const FrameMotion& frame,
                   const AdmBackground& bg, const Eos& eos, double t) {
    if (frame.is_identity) {
        return dl_du(EulerianFluid(fluid.u_tilde, fluid.J0_tilde), bg, eos);
    }
    const Grid& g = fluid.u_tilde.grid();
    Field out(g, FieldKind::OneFormDensity);
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        const MovingLocal ml = moving_local(frame, bg, g.node_point(n), t);
        out.set_vec(n, local_moving_dl_du(ml, eos, fluid.u_tilde.vec_at(n),
                                          fluid.J0_tilde(n)));
    }
    return out;
}

Field moving_dl_dJ0(const MovingEulerianFluid& fluid, const FrameMotion& frame,
                    const AdmBackground& bg, const Eos& eos, double t) {
    if (frame.is_identity) {
        return dl_dJ0(EulerianFluid(fluid.u_tilde, fluid.J0_tilde), bg, eos);
    }
    const Grid& g = fluid.u_tilde.grid();
    Field out(g, FieldKind::Scalar);
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        const MovingLocal ml = moving_local(frame, bg, g.node_point(n), t);
        out(n) = local_moving_dl_dJ0(ml, eos, fluid.u_tilde.vec_at(n),
                                     fluid.J0_tilde(n));
    }
    return out;
}

Field moving_velocity_recovery(const MovingFrameState& state,
                               const FrameMotion& frame,
                               const AdmBackground& bg, const Eos& eos) {
    if (frame.is_identity) {
        return velocity_recovery(
            FluidState(state.m_tilde, state.J0_tilde, state.t, state.j0_floor),
            bg, eos);
    }
    const Grid& g = state.m_tilde.grid();
    Field u(g, FieldKind::Vector);
    parallel_for_ranges(g.num_nodes(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t n = begin; n < end; ++n) {
            const MovingLocal ml = moving_local(frame, bg, g.node_point(n), state.t);
            // Rotate the momentum back to the image point...
            const Mat3 jac_inv = mat_inverse(ml.jac);
            const Vec3 w_low =
                matvec_transpose(jac_inv, state.m_tilde.vec_at(n));
            const Vec3 w_up = sym_matvec(ml.lg.gamma_inv, w_low);
            const double norm2 = dot(w_low, w_up);
            const double w_norm = norm2 > 0.0 ? std::sqrt(norm2) : 0.0;
            Vec3 w;  // beta + o + J u_tilde
            if (w_norm == 0.0) {
                w = vzero();
            } else {
                const double s = recover_speed(w_norm, state.J0_tilde(n),
                                               ml.lg.alpha, ml.lg.vol, eos);
                w = (s / w_norm) * w_up;
            }
            // ...then pull the velocity back to the label point.
            u.set_vec(n, matvec(jac_inv, w - ml.lg.beta - ml.o));
        }
    });
    return u;
}

std::pair<Field, Field> hat_transform(const MovingFrameState& state,
                                      const FrameMotion& frame,
                                      const AdmBackground& bg,
                                      const Eos& eos) {
    const Field u_tilde = moving_velocity_recovery(state, frame, bg, eos);
    if (frame.is_identity) {
        return {u_tilde, state.J0_tilde};
    }
    const SpatialMap map = frame.map_at(state.t);
    SpatialMap inv_map;
    inv_map.name = map.name + "_inverse";
    inv_map.forward = map.inverse;
    inv_map.inverse = map.forward;
    inv_map.jacobian = [map](const Vec3& x) {
        return mat_inverse(map.jacobian(map.inverse(x)));
    };
    inv_map.time_derivative = [](const Vec3&) { return vzero(); };

    Field u_hat = pushforward_vector(map, u_tilde);
    Field j0_hat = pullback_density(inv_map, state.J0_tilde);
    return {std::move(u_hat), std::move(j0_hat)};
}

MovingEpRhs moving_ep_rhs(const MovingFrameState& state,
                          const FrameMotion& frame, const AdmBackground& bg,
                          const Eos& eos, const DynamicsOptions& opts) {
    if (frame.is_identity) {
        EpRhs rhs = ep_rhs(
            FluidState(state.m_tilde, state.J0_tilde, state.t, state.j0_floor),
            bg, eos, opts);
        return {std::move(rhs.dm_dt), std::move(rhs.dJ0_dt), std::move(rhs.u)};
    }
    const Grid& g = state.m_tilde.grid();
    Field u_tilde = moving_velocity_recovery(state, frame, bg, eos);

    Field phi(g, FieldKind::Scalar);
    parallel_for_ranges(g.num_nodes(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t n = begin; n < end; ++n) {
            const MovingLocal ml = moving_local(frame, bg, g.node_point(n), state.t);
            phi(n) = local_moving_dl_dJ0(ml, eos, u_tilde.vec_at(n),
                                         state.J0_tilde(n));
        }
    });

    Field dm = lie_derivative_oneform_density(u_tilde, state.m_tilde);
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        for (int a = 0; a < g.dim(); ++a) dm(n, a) = -dm(n, a);
    }
    for (int a = 0; a < g.dim(); ++a) {
        const Field dphi = partial_derivative(phi, a);
        for (std::size_t n = 0; n < g.num_nodes(); ++n) {
            dm(n, a) += state.J0_tilde(n) * dphi(n);
        }
    }
    Field dj0 = lie_derivative_density(u_tilde, state.J0_tilde);
    for (std::size_t n = 0; n < g.num_nodes(); ++n) dj0(n) = -dj0(n);

    if (opts.hyperdissipation && opts.nu > 0.0) {
        const Field lap2_m = laplacian(laplacian(state.m_tilde));
        const Field lap2_j = laplacian(laplacian(state.J0_tilde));
        for (std::size_t n = 0; n < g.num_nodes(); ++n) {
            for (int a = 0; a < g.dim(); ++a) dm(n, a) -= opts.nu * lap2_m(n, a);
            dj0(n) -= opts.nu * lap2_j(n);
        }
    }

    require_finite(dm, "moving_ep_rhs momentum");
    require_finite(dj0, "moving_ep_rhs advection");
    return {std::move(dm), std::move(dj0), std::move(u_tilde)};
}

namespace {

MovingFrameState moving_stage(const MovingFrameState& base,
                              const MovingEpRhs& k, double scale) {
    Field m = base.m_tilde;
    Field j0 = base.J0_tilde;
    for (std::size_t n = 0; n < m.num_nodes(); ++n) {
        for (int a = 0; a < m.ncomp(); ++a) m(n, a) += scale * k.dm_dt(n, a);
        j0(n) += scale * k.dJ0_dt(n);
    }
    MovingFrameState s(std::move(m), std::move(j0), base.t + scale,
                       base.j0_floor);
    s.apply_floor();
    return s;
}

}  // namespace

MovingFrameState moving_rk4_step(const MovingFrameState& state,
                                 const FrameMotion& frame,
                                 const AdmBackground& bg, const Eos& eos,
                                 double dt, const DynamicsOptions& opts,
                                 StageVelocities* stages) {
    const MovingEpRhs k1 = moving_ep_rhs(state, frame, bg, eos, opts);
    const MovingFrameState s2 = moving_stage(state, k1, 0.5 * dt);
    const MovingEpRhs k2 = moving_ep_rhs(s2, frame, bg, eos, opts);
    const MovingFrameState s3 = moving_stage(state, k2, 0.5 * dt);
    const MovingEpRhs k3 = moving_ep_rhs(s3, frame, bg, eos, opts);
    const MovingFrameState s4 = moving_stage(state, k3, dt);
    const MovingEpRhs k4 = moving_ep_rhs(s4, frame, bg, eos, opts);

    Field m = state.m_tilde;
    Field j0 = state.J0_tilde;
    const double w = dt / 6.0;
    for (std::size_t n = 0; n < m.num_nodes(); ++n) {
        for (int a = 0; a < m.ncomp(); ++a) {
            m(n, a) += w * (k1.dm_dt(n, a) + 2.0 * k2.dm_dt(n, a) +
                            2.0 * k3.dm_dt(n, a) + k4.dm_dt(n, a));
        }
        j0(n) += w * (k1.dJ0_dt(n) + 2.0 * k2.dJ0_dt(n) + 2.0 * k3.dJ0_dt(n) +
                      k4.dJ0_dt(n));
    }
    MovingFrameState next(std::move(m), std::move(j0), state.t + dt,
                          state.j0_floor);
    next.apply_floor();

    try {
        Field u_end = moving_velocity_recovery(next, frame, bg, eos);
        require_finite(u_end, "moving_rk4_step recovered velocity");
    } catch (const InvariantError& e) {
        throw InvariantError(std::string("moving_rk4_step rejected: ") +
                             e.what());
    }

    if (stages != nullptr) {
        stages->u.clear();
        stages->u.push_back(k1.u_tilde);
        stages->u.push_back(k2.u_tilde);
        stages->u.push_back(k3.u_tilde);
        stages->u.push_back(k4.u_tilde);
    }
    return next;
}

MovingFrameState make_moving_state(const Field& u_tilde, const Field& J0_tilde,
                                   const FrameMotion& frame,
                                   const AdmBackground& bg, const Eos& eos,
                                   double t) {
    const Grid& g = J0_tilde.grid();
    const double volume =
        g.extent(0) * g.extent(1) * g.extent(2);
    const double floor = 1e-12 * integrate(J0_tilde) / volume;
    MovingEulerianFluid fluid(u_tilde, J0_tilde);
    MovingFrameState state(moving_dl_du(fluid, frame, bg, eos, t), J0_tilde, t,
                           floor);
    state.apply_floor();
    return state;
}

FrameCompareReport frame_equivalence_check(const FluidState& inertial,
                                           const MovingFrameState& moving,
                                           const FrameMotion& frame,
                                           const AdmBackground& bg,
                                           const Eos& eos) {
    if (frame.kind != "translation") {
        throw ConfigError("frame_equivalence_check: translation frames only");
    }
    if (!inertial.m.grid().same_shape(moving.m_tilde.grid())) {
        throw ConfigError("frame_equivalence_check: grid mismatch");
    }
    if (inertial.t != moving.t) {
        throw ConfigError("frame_equivalence_check: time mismatch");
    }
    const Grid& g = inertial.m.grid();
    const Vec3 c = frame.velocity(vzero(), moving.t);
    const Vec3 offset = moving.t * c;

    const Field u = velocity_recovery(inertial, bg, eos);
    const Field u_tilde = moving_velocity_recovery(moving, frame, bg, eos);

    FrameCompareReport report;
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        const Vec3 x = g.node_point(n);
        const Vec3 x_label = x - offset;
        const Vec3 ut = interpolate_vec(u_tilde, x_label);
        const Vec3 uu = u.vec_at(n);
        for (int a = 0; a < g.dim(); ++a) {
            report.max_du =
                std::max(report.max_du, std::abs(uu[a] - (c[a] + ut[a])));
        }
        const double jt = interpolate_scalar(moving.J0_tilde, x_label);
        report.max_dJ0 =
            std::max(report.max_dJ0, std::abs(inertial.J0(n) - jt));
    }
    return report;
}

}  // namespace epadm
