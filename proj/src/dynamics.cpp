#include "epadm/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "epadm/errors.hpp"
#include "epadm/parallel.hpp"

namespace epadm {

FluidState::FluidState(Field m_in, Field j0_in, double time, double floor)
    : m(std::move(m_in)), J0(std::move(j0_in)), t(time), j0_floor(floor) {
    if (!m.grid().same_shape(J0.grid())) {
        throw ConfigError("FluidState: m and J0 grids differ");
    }
}

void FluidState::apply_floor() {
    for (std::size_t n = 0; n < J0.num_nodes(); ++n) {
        if (J0(n) < j0_floor) J0(n) = j0_floor;
    }
}

FluidState make_fluid_state(const Field& u, const Field& J0,
                            const AdmBackground& bg, const Eos& eos,
                            double t) {
    const double mean_j0 = integrate(J0) / (J0.grid().extent(0) *
                                            J0.grid().extent(1) *
                                            J0.grid().extent(2));
    const double floor = 1e-12 * mean_j0;
    EulerianFluid fluid(u, J0);
    FluidState state(dl_du(fluid, bg, eos), J0, t, floor);
    state.apply_floor();
    return state;
}

namespace {

struct SpeedFn {
    double J0, alpha, vol;
    const Eos* eos;

    double value(double s) const {
        const double n = J0 * std::sqrt(alpha * alpha - s * s);
        return vol * eos->drho_dn(n) * J0 * J0 * s / n;
    }
    double derivative(double s) const {
        const double n = J0 * std::sqrt(alpha * alpha - s * s);
        const double J2 = J0 * J0;
        const double dn = -J2 * s / n;
        const double rp = eos->drho_dn(n);
        const double rpp = eos->d2rho_dn2(n);
        return vol * J2 * (rpp * dn * s / n + rp / n - rp * s * dn / (n * n));
    }
};

double golden_max(const SpeedFn& f, double lo, double hi) {
    constexpr double inv_phi = 0.6180339887498948482;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f.value(c), fd = f.value(d);
    for (int it = 0; it < 80 && (b - a) > 1e-14 * hi; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f.value(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f.value(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double recover_speed(double m_norm, double J0, double alpha, double vol,
                     const Eos& eos) {
    if (m_norm == 0.0) return 0.0;
    if (!(J0 > 0.0)) {
        throw InvariantError("recover_speed: J0 must be positive");
    }
    const SpeedFn fn{J0, alpha, vol, &eos};

    double hi = alpha * (1.0 - 1e-12);
    double f_hi = fn.value(hi) - m_norm;
    if (f_hi < 0.0) {
        // The momentum magnitude is not monotone up to the light bound for
        // every eos; restrict the bracket to the rising branch.
        const double s_peak = golden_max(fn, 0.0, hi);
        const double g_peak = fn.value(s_peak);
        if (g_peak < m_norm) {
            std::ostringstream os;
            os << "recover_speed: no subluminal root (|m| = " << m_norm
               << ", max attainable = " << g_peak << ")";
            throw InvariantError(os.str());
        }
        hi = s_peak;
        f_hi = g_peak - m_norm;
    }

    double lo = 0.0;  // f(0) = -m_norm < 0
    // Low-speed linearized guess, clipped into the bracket.
    const double slope0 = vol * J0 * eos.drho_dn(J0 * alpha) / alpha;
    double s = std::min(m_norm / slope0, 0.5 * (lo + hi));
    if (!(s > lo && s < hi)) s = 0.5 * (lo + hi);

    const double tol = 1e-13 * alpha;
    for (int it = 0; it < 100; ++it) {
        const double f = fn.value(s) - m_norm;
        if (f == 0.0) return s;
        if (f > 0.0) {
            hi = s;
        } else {
            lo = s;
        }
        const double df = fn.derivative(s);
        double next = (df != 0.0) ? s - f / df : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) <= tol) return next;
        s = next;
    }
    throw InvariantError("recover_speed: no convergence after 100 iterations");
}

namespace {

std::string node_label(const Grid& g, std::size_t node) {
    const auto c = g.coords(node);
    std::ostringstream os;
    os << "node (" << c[0] << "," << c[1] << "," << c[2] << ")";
    return os.str();
}

}  // namespace

Field velocity_recovery(const FluidState& state, const AdmBackground& bg,
                        const Eos& eos) {
    const Grid& g = state.m.grid();
    Field u(g, FieldKind::Vector);
    parallel_for_ranges(g.num_nodes(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t n = begin; n < end; ++n) {
            const LocalGeom lg = local_geom(bg, g.node_point(n));
            const Vec3 m = state.m.vec_at(n);
            const Vec3 m_up = sym_matvec(lg.gamma_inv, m);
            const double norm2 = dot(m, m_up);
            const double m_norm = norm2 > 0.0 ? std::sqrt(norm2) : 0.0;
            if (m_norm == 0.0) {
                u.set_vec(n, vzero() - lg.beta);
                continue;
            }
            try {
                const double s =
                    recover_speed(m_norm, state.J0(n), lg.alpha, lg.vol, eos);
                u.set_vec(n, (s / m_norm) * m_up - lg.beta);
            } catch (const InvariantError& e) {
                throw InvariantError(std::string(e.what()) + " at " +
                                     node_label(g, n));
            }
        }
    });
    return u;
}

Field lie_derivative_oneform_density(const Field& u, const Field& m) {
    const Grid& g = u.grid();
    Field out(g, FieldKind::OneFormDensity);
    const int d = g.dim();

    // Transport term d_b(u^b m_a).
    for (int b = 0; b < d; ++b) {
        Field flux(g, m.kind());
        for (std::size_t n = 0; n < g.num_nodes(); ++n) {
            for (int a = 0; a < d; ++a) flux(n, a) = u(n, b) * m(n, a);
        }
        const Field dflux = partial_derivative(flux, b);
        for (std::size_t n = 0; n < g.num_nodes(); ++n) {
            for (int a = 0; a < d; ++a) out(n, a) += dflux(n, a);
        }
    }
    // Stretching term m_b d_a u^b.
    for (int a = 0; a < d; ++a) {
        const Field du = partial_derivative(u, a);
        for (std::size_t n = 0; n < g.num_nodes(); ++n) {
            double s = 0.0;
            for (int b = 0; b < d; ++b) s += m(n, b) * du(n, b);
            out(n, a) += s;
        }
    }
    return out;
}

Field lie_derivative_density(const Field& u, const Field& d) {
    const Grid& g = u.grid();
    Field out(g, FieldKind::ScalarDensity);
    for (int a = 0; a < g.dim(); ++a) {
        Field flux(g, FieldKind::ScalarDensity);
        for (std::size_t n = 0; n < g.num_nodes(); ++n) {
            flux(n) = d(n) * u(n, a);
        }
        const Field dflux = partial_derivative(flux, a);
        for (std::size_t n = 0; n < g.num_nodes(); ++n) out(n) += dflux(n);
    }
    return out;
}

EpRhs ep_rhs(const FluidState& state, const AdmBackground& bg, const Eos& eos,
             const DynamicsOptions& opts) {
    const Grid& g = state.m.grid();
    Field u = velocity_recovery(state, bg, eos);

    Field phi(g, FieldKind::Scalar);
    parallel_for_ranges(g.num_nodes(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t n = begin; n < end; ++n) {
            const LocalGeom lg = local_geom(bg, g.node_point(n));
            phi(n) = local_dl_dJ0(lg, eos, u.vec_at(n), state.J0(n));
        }
    });

    Field dm = lie_derivative_oneform_density(u, state.m);
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        for (int a = 0; a < g.dim(); ++a) dm(n, a) = -dm(n, a);
    }
    for (int a = 0; a < g.dim(); ++a) {
        const Field dphi = partial_derivative(phi, a);
        for (std::size_t n = 0; n < g.num_nodes(); ++n) {
            dm(n, a) += state.J0(n) * dphi(n);
        }
    }

    Field dj0 = lie_derivative_density(u, state.J0);
    for (std::size_t n = 0; n < g.num_nodes(); ++n) dj0(n) = -dj0(n);

    if (opts.hyperdissipation && opts.nu > 0.0) {
        const Field lap2_m = laplacian(laplacian(state.m));
        const Field lap2_j = laplacian(laplacian(state.J0));
        for (std::size_t n = 0; n < g.num_nodes(); ++n) {
            for (int a = 0; a < g.dim(); ++a) dm(n, a) -= opts.nu * lap2_m(n, a);
            dj0(n) -= opts.nu * lap2_j(n);
        }
    }

    require_finite(dm, "ep_rhs momentum");
    require_finite(dj0, "ep_rhs advection");
    return {std::move(dm), std::move(dj0), std::move(u)};
}

namespace {

FluidState stage_state(const FluidState& base, const EpRhs& k, double scale) {
    Field m = base.m;
    Field j0 = base.J0;
    for (std::size_t n = 0; n < m.num_nodes(); ++n) {
        for (int a = 0; a < m.ncomp(); ++a) m(n, a) += scale * k.dm_dt(n, a);
        j0(n) += scale * k.dJ0_dt(n);
    }
    FluidState s(std::move(m), std::move(j0), base.t + scale, base.j0_floor);
    s.apply_floor();
    return s;
}

}  // namespace

FluidState rk4_step(const FluidState& state, const AdmBackground& bg,
                    const Eos& eos, double dt, const DynamicsOptions& opts,
                    StageVelocities* stages) {
    const EpRhs k1 = ep_rhs(state, bg, eos, opts);
    const FluidState s2 = stage_state(state, k1, 0.5 * dt);
    const EpRhs k2 = ep_rhs(s2, bg, eos, opts);
    const FluidState s3 = stage_state(state, k2, 0.5 * dt);
    const EpRhs k3 = ep_rhs(s3, bg, eos, opts);
    const FluidState s4 = stage_state(state, k3, dt);
    const EpRhs k4 = ep_rhs(s4, bg, eos, opts);

    Field m = state.m;
    Field j0 = state.J0;
    const double w = dt / 6.0;
    for (std::size_t n = 0; n < m.num_nodes(); ++n) {
        for (int a = 0; a < m.ncomp(); ++a) {
            m(n, a) += w * (k1.dm_dt(n, a) + 2.0 * k2.dm_dt(n, a) +
                            2.0 * k3.dm_dt(n, a) + k4.dm_dt(n, a));
        }
        j0(n) += w * (k1.dJ0_dt(n) + 2.0 * k2.dJ0_dt(n) + 2.0 * k3.dJ0_dt(n) +
                      k4.dJ0_dt(n));
    }
    FluidState next(std::move(m), std::move(j0), state.t + dt, state.j0_floor);
    next.apply_floor();

    try {
        Field u_end = velocity_recovery(next, bg, eos);
        require_finite(u_end, "rk4_step recovered velocity");
    } catch (const InvariantError& e) {
        throw InvariantError(std::string("rk4_step rejected: ") + e.what());
    }

    if (stages != nullptr) {
        stages->u.clear();
        stages->u.push_back(k1.u);
        stages->u.push_back(k2.u);
        stages->u.push_back(k3.u);
        stages->u.push_back(k4.u);
    }
    return next;
}

double cfl_dt(const FluidState& state, const AdmBackground& bg, const Eos& eos,
              double safety) {
    if (!(safety > 0.0 && safety <= 1.0)) {
        throw ConfigError("cfl_dt: safety must lie in (0, 1]");
    }
    const Grid& g = state.m.grid();
    const Field u = velocity_recovery(state, bg, eos);
    double dt_min = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        const LocalGeom lg = local_geom(bg, g.node_point(n));
        const Vec3 uv = u.vec_at(n);
        const double nd = local_number_density(lg, uv, state.J0(n));
        const double cs = std::sqrt(eos.sound_speed_sq(nd));
        for (int a = 0; a < g.dim(); ++a) {
            const double denom = std::abs(uv[a]) + std::abs(lg.beta[a]) +
                                 cs * lg.alpha / std::sqrt(lg.gamma(a, a));
            // Axes with vanishing signal speed contribute the spacing itself
            // (unit-speed cap).
            const double candidate =
                (denom > 1e-8) ? g.spacing(a) / denom : g.spacing(a);
            dt_min = std::min(dt_min, candidate);
        }
    }
    return safety * dt_min;
}

}  // namespace epadm
