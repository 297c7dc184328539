#include "epadm/verify.hpp"

#include <cmath>

#include "epadm/dynamics.hpp"
#include "epadm/errors.hpp"

namespace epadm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Normwise relative error: max |a - b| over samples against max |b|.
struct ErrAccum {
    double max_diff = 0.0;
    double max_ref = 0.0;

    void add(double approx, double exact) {
        max_diff = std::max(max_diff, std::abs(approx - exact));
        max_ref = std::max(max_ref, std::abs(exact));
    }
    double rel() const {
        return max_ref > 0.0 ? max_diff / max_ref : max_diff;
    }
};

CheckResult make_check(const std::string& name, double err, double tol) {
    return {name, err, tol, err <= tol};
}

struct FourierMode {
    Vec3 k;
    double amp;
    double phase;
};

std::vector<FourierMode> draw_modes(std::mt19937_64& rng,
                                    const std::array<double, 3>& extent,
                                    int dim, double amplitude) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> wave(-2, 2);
    std::vector<FourierMode> modes;
    const int count = 4;
    for (int m = 0; m < count; ++m) {
        FourierMode mode;
        bool nonzero = false;
        for (int a = 0; a < 3; ++a) {
            const int w = (a < dim) ? wave(rng) : 0;
            mode.k[a] = kTwoPi * w / extent[a];
            nonzero = nonzero || (w != 0);
        }
        if (!nonzero) mode.k[0] = kTwoPi / extent[0];
        mode.amp = amplitude * (0.25 + 0.75 * unit(rng)) / count;
        mode.phase = kTwoPi * unit(rng);
        modes.push_back(mode);
    }
    return modes;
}

}  // namespace

bool all_pass(const std::vector<CheckResult>& results) {
    for (const auto& r : results) {
        if (!r.pass) return false;
    }
    return true;
}

ScalarFn random_smooth_scalar(std::mt19937_64& rng,
                              const std::array<double, 3>& extent, int dim,
                              double base, double amplitude) {
    auto modes = draw_modes(rng, extent, dim, amplitude);
    return [base, modes](const Vec3& x) {
        double v = base;
        for (const auto& m : modes) v += m.amp * std::sin(dot(m.k, x) + m.phase);
        return v;
    };
}

VectorFn random_smooth_vector(std::mt19937_64& rng,
                              const std::array<double, 3>& extent, int dim,
                              double amplitude) {
    std::array<ScalarFn, 3> comps;
    for (int a = 0; a < 3; ++a) {
        comps[a] = (a < dim)
                       ? random_smooth_scalar(rng, extent, dim, 0.0, amplitude)
                       : ScalarFn([](const Vec3&) { return 0.0; });
    }
    return [comps](const Vec3& x) {
        return Vec3{comps[0](x), comps[1](x), comps[2](x)};
    };
}

RandomFluid random_subluminal_fluid(std::mt19937_64& rng, const Grid& grid,
                                    const AdmBackground& bg, double fraction) {
    const std::array<double, 3> ext{grid.extent(0), grid.extent(1),
                                    grid.extent(2)};
    const VectorFn raw = random_smooth_vector(rng, ext, grid.dim(), 1.0);
    const ScalarFn dens = random_smooth_scalar(rng, ext, grid.dim(), 1.0, 0.3);

    // Scale the raw draw so v = beta + u stays inside the light bound.
    double lambda = 1e300;
    for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
        const Vec3 x = grid.node_point(n);
        const LocalGeom lg = local_geom(bg, x);
        const Vec3 w = raw(x);
        const double wn = std::sqrt(std::max(0.0, sym_quad(lg.gamma, w, w)));
        if (wn > 1e-14) lambda = std::min(lambda, fraction * lg.alpha / wn);
    }
    if (lambda == 1e300) lambda = 0.0;

    RandomFluid out{Field(grid, FieldKind::Vector),
                    Field(grid, FieldKind::ScalarDensity)};
    for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
        const Vec3 x = grid.node_point(n);
        const LocalGeom lg = local_geom(bg, x);
        out.u.set_vec(n, lambda * raw(x) - lg.beta);
        out.J0(n) = dens(x);
    }
    return out;
}

RandomFluid random_subluminal_moving_fluid(std::mt19937_64& rng,
                                           const Grid& grid,
                                           const AdmBackground& bg,
                                           const FrameMotion& frame, double t,
                                           double fraction) {
    const std::array<double, 3> ext{grid.extent(0), grid.extent(1),
                                    grid.extent(2)};
    const VectorFn raw = random_smooth_vector(rng, ext, grid.dim(), 1.0);
    const ScalarFn dens = random_smooth_scalar(rng, ext, grid.dim(), 1.0, 0.3);

    double lambda = 1e300;
    for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
        const MovingLocal ml = moving_local(frame, bg, grid.node_point(n), t);
        const Vec3 w = raw(ml.y);
        const double wn =
            std::sqrt(std::max(0.0, sym_quad(ml.lg.gamma, w, w)));
        if (wn > 1e-14) lambda = std::min(lambda, fraction * ml.lg.alpha / wn);
    }
    if (lambda == 1e300) lambda = 0.0;

    RandomFluid out{Field(grid, FieldKind::Vector),
                    Field(grid, FieldKind::ScalarDensity)};
    for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
        const Vec3 x = grid.node_point(n);
        const MovingLocal ml = moving_local(frame, bg, x, t);
        const Vec3 v_hat = lambda * raw(ml.y) - ml.lg.beta - ml.o;
        out.u.set_vec(n, matvec(mat_inverse(ml.jac), v_hat));
        out.J0(n) = dens(x);
    }
    return out;
}

namespace {

const std::vector<std::string>& builtin_background_names() {
    static const std::vector<std::string> names{"minkowski", "gauge_lapse",
                                                "shift_wind", "conformal"};
    return names;
}

Eos eos_for_config(int cfg) {
    switch (cfg % 3) {
        case 0: return Eos::dust(1.0);
        case 1: return Eos::polytrope(0.4, 5.0 / 3.0);
        default: return Eos::linear_plus_polytrope(1.0, 0.1, 5.0 / 3.0);
    }
}

// Inertial variational-derivative checks on one random configuration.
void varderiv_inertial_checks(const Grid& grid, const AdmBackground& bg,
                              const Eos& eos, const RandomFluid& fluid,
                              const std::string& tag, double tol,
                              std::vector<CheckResult>& out) {
    ErrAccum err_du, err_dj0, err_T, err_alpha, err_beta;

    double u_scale = 1.0, j_scale = 0.0, g_scale = 0.0, a_scale = 0.0,
           b_scale = 1.0;
    for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
        const Vec3 x = grid.node_point(n);
        const LocalGeom lg = local_geom(bg, x);
        u_scale = std::max({u_scale, std::abs(fluid.u(n, 0))});
        j_scale = std::max(j_scale, std::abs(fluid.J0(n)));
        a_scale = std::max(a_scale, lg.alpha);
        for (int c = 0; c < 6; ++c) g_scale = std::max(g_scale, std::abs(lg.gamma.s[c]));
        for (int a = 0; a < 3; ++a) b_scale = std::max(b_scale, std::abs(lg.beta[a]));
    }
    const double eps_u = 1e-6 * u_scale;
    const double eps_j = 1e-6 * j_scale;
    const double eps_g = 1e-6 * g_scale;
    const double eps_a = 1e-6 * a_scale;
    const double eps_b = 1e-6 * b_scale;

    for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
        const Vec3 x = grid.node_point(n);
        const LocalGeom lg = local_geom(bg, x);
        const Vec3 u = fluid.u.vec_at(n);
        const double j0 = fluid.J0(n);

        // dl/du: perturb one velocity component of the local integrand.
        const Vec3 cf_du = local_dl_du(lg, eos, u, j0);
        for (int a = 0; a < grid.dim(); ++a) {
            Vec3 up = u, um = u;
            up[a] += eps_u;
            um[a] -= eps_u;
            const double fd = (local_lagrangian_density(lg, eos, up, j0) -
                               local_lagrangian_density(lg, eos, um, j0)) /
                              (2.0 * eps_u);
            err_du.add(fd, cf_du[a]);
        }

        // dl/dJ0 at fixed geometry.
        const double cf_dj0 = local_dl_dJ0(lg, eos, u, j0);
        {
            const double fd =
                (local_lagrangian_density(lg, eos, u, j0 + eps_j) -
                 local_lagrangian_density(lg, eos, u, j0 - eps_j)) /
                (2.0 * eps_j);
            err_dj0.add(fd, cf_dj0);
        }

        // Stress-energy: perturb gamma_ab with J0 rescaled by the volume
        // factor (the density rides on the metric volume element).
        const Sym3 cf_T = local_stress_energy(lg, eos, u, j0);
        const double det0 = sym_det(lg.gamma);
        for (int a = 0; a < 3; ++a) {
            for (int b = a; b < 3; ++b) {
                const double mult = (a == b) ? 1.0 : 2.0;
                Sym3 gp = lg.gamma, gm = lg.gamma;
                gp.set(a, b, gp(a, b) + eps_g);
                gm.set(a, b, gm(a, b) - eps_g);
                const LocalGeom lgp = geom_from_values(lg.alpha, lg.beta, gp);
                const LocalGeom lgm = geom_from_values(lg.alpha, lg.beta, gm);
                const double j0p = j0 * std::sqrt(det0 / sym_det(gp));
                const double j0m = j0 * std::sqrt(det0 / sym_det(gm));
                const double fd =
                    (local_lagrangian_density(lgp, eos, u, j0p) -
                     local_lagrangian_density(lgm, eos, u, j0m)) /
                    (2.0 * eps_g);
                err_T.add(2.0 / lg.vol * fd / mult, cf_T(a, b));
            }
        }

        // drho/dalpha with J0 proportional to 1/alpha.
        const double cf_da = local_drho_dalpha(lg, eos, u, j0);
        {
            const LocalGeom lgp =
                geom_from_values(lg.alpha + eps_a, lg.beta, lg.gamma);
            const LocalGeom lgm =
                geom_from_values(lg.alpha - eps_a, lg.beta, lg.gamma);
            const double j0p = j0 * lg.alpha / lgp.alpha;
            const double j0m = j0 * lg.alpha / lgm.alpha;
            const double fd =
                (eos.rho(local_number_density(lgp, u, j0p)) -
                 eos.rho(local_number_density(lgm, u, j0m))) /
                (2.0 * eps_a);
            err_alpha.add(fd, cf_da);
        }

        // drho/dbeta at fixed J0.
        const Vec3 cf_db = local_drho_dbeta(lg, eos, u, j0);
        for (int a = 0; a < 3; ++a) {
            Vec3 bp = lg.beta, bm = lg.beta;
            bp[a] += eps_b;
            bm[a] -= eps_b;
            const LocalGeom lgp = geom_from_values(lg.alpha, bp, lg.gamma);
            const LocalGeom lgm = geom_from_values(lg.alpha, bm, lg.gamma);
            const double fd = (eos.rho(local_number_density(lgp, u, j0)) -
                               eos.rho(local_number_density(lgm, u, j0))) /
                              (2.0 * eps_b);
            err_beta.add(fd, cf_db[a]);
        }
    }

    out.push_back(make_check("dl_du[" + tag + "]", err_du.rel(), tol));
    out.push_back(make_check("dl_dJ0[" + tag + "]", err_dj0.rel(), tol));
    out.push_back(make_check("stress_energy[" + tag + "]", err_T.rel(), tol));
    out.push_back(
        make_check("drho_dalpha[" + tag + "]", err_alpha.rel(), tol));
    out.push_back(make_check("drho_dbeta[" + tag + "]", err_beta.rel(), tol));
}

void varderiv_moving_checks(const Grid& grid, const AdmBackground& bg,
                            const Eos& eos, const FrameMotion& frame, double t,
                            const RandomFluid& fluid, const std::string& tag,
                            double tol, std::vector<CheckResult>& out) {
    ErrAccum err_du, err_dj0;
    double u_scale = 1.0, j_scale = 0.0;
    for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
        for (int a = 0; a < grid.dim(); ++a) {
            u_scale = std::max(u_scale, std::abs(fluid.u(n, a)));
        }
        j_scale = std::max(j_scale, std::abs(fluid.J0(n)));
    }
    const double eps_u = 1e-6 * u_scale;
    const double eps_j = 1e-6 * j_scale;

    for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
        const MovingLocal ml = moving_local(frame, bg, grid.node_point(n), t);
        const Vec3 u = fluid.u.vec_at(n);
        const double j0 = fluid.J0(n);

        const Vec3 cf_du = local_moving_dl_du(ml, eos, u, j0);
        for (int a = 0; a < grid.dim(); ++a) {
            Vec3 up = u, um = u;
            up[a] += eps_u;
            um[a] -= eps_u;
            const double fd =
                (local_moving_lagrangian_density(ml, eos, up, j0) -
                 local_moving_lagrangian_density(ml, eos, um, j0)) /
                (2.0 * eps_u);
            err_du.add(fd, cf_du[a]);
        }
        const double cf_dj0 = local_moving_dl_dJ0(ml, eos, u, j0);
        const double fd =
            (local_moving_lagrangian_density(ml, eos, u, j0 + eps_j) -
             local_moving_lagrangian_density(ml, eos, u, j0 - eps_j)) /
            (2.0 * eps_j);
        err_dj0.add(fd, cf_dj0);
    }
    out.push_back(make_check("moving_dl_du[" + tag + "]", err_du.rel(), tol));
    out.push_back(
        make_check("moving_dl_dJ0[" + tag + "]", err_dj0.rel(), tol));
}

FrameMotion frame_for(int which, const std::array<double, 3>& extent) {
    FrameParams fp;
    fp.extent = extent;
    if (which == 0) {
        fp.velocity = {0.2, 0.1, 0.0};
        return builtin_frame("translation", fp);
    }
    if (which == 1) {
        fp.amplitude = 0.05;
        fp.omega = 1.3;
        return builtin_frame("shear_test", fp);
    }
    Mat3 A = Mat3::identity();
    A(0, 0) = 1.15;
    A(0, 1) = 0.05;
    A(1, 0) = 0.02;
    A(1, 1) = 0.95;
    A(2, 2) = 1.05;
    Mat3 B{};
    B(0, 0) = 0.03;
    B(0, 1) = 0.01;
    B(1, 1) = -0.02;
    B(2, 2) = 0.01;
    FrameParams lp;
    lp.extent = extent;
    lp.linear_a = A;
    lp.linear_b = B;
    return builtin_frame("linear_test", lp);
}

}  // namespace

std::vector<CheckResult> verify_varderiv(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<CheckResult> out;
    const double tol = 1e-5;
    const std::array<double, 3> extent{1.0, 1.0, 1.0};
    const Grid grid = Grid::make(3, {32, 32, 32}, extent);

    for (const std::string& bg_name : builtin_background_names()) {
        BackgroundParams bp;
        bp.extent = extent;
        const AdmBackground bg = builtin_background(bg_name, bp);
        for (int cfg = 0; cfg < 3; ++cfg) {
            const Eos eos = eos_for_config(cfg);
            const RandomFluid fluid =
                random_subluminal_fluid(rng, grid, bg, 0.8);
            const std::string tag =
                bg_name + ",cfg" + std::to_string(cfg) + "," + eos.name();
            varderiv_inertial_checks(grid, bg, eos, fluid, tag, tol, out);
        }
    }

    // Moving-frame derivatives: translation, shear, and a non-unit-
    // determinant linear frame, on two backgrounds each.
    const double t = 0.6;
    for (int which = 0; which < 3; ++which) {
        const FrameMotion frame = frame_for(which, extent);
        for (const std::string& bg_name :
             {std::string("minkowski"), std::string("conformal")}) {
            BackgroundParams bp;
            bp.extent = extent;
            const AdmBackground bg = builtin_background(bg_name, bp);
            for (int cfg = 0; cfg < 3; ++cfg) {
                const Eos eos = eos_for_config(cfg);
                const RandomFluid fluid = random_subluminal_moving_fluid(
                    rng, grid, bg, frame, t, 0.8);
                const std::string tag = frame.kind + "," + bg_name + ",cfg" +
                                        std::to_string(cfg);
                varderiv_moving_checks(grid, bg, eos, frame, t, fluid, tag,
                                       tol, out);
            }
        }
    }
    return out;
}

std::vector<CheckResult> verify_pullback(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<CheckResult> out;
    const std::array<double, 3> extent{1.0, 1.0, 1.0};
    const Grid grid = Grid::make(3, {16, 16, 16}, extent);
    const double t = 0.7;

    MapParams mp;
    mp.extent = extent;
    mp.velocity = {0.3, -0.2, 0.1};
    mp.amplitude = 0.06;
    Mat3 A = Mat3::identity();
    A(0, 0) = 1.2;
    A(0, 1) = 0.1;
    A(1, 1) = 0.9;
    A(2, 2) = 1.05;
    mp.linear = A;
    mp.linear_velocity = {0.05, 0.02, 0.0};

    const std::vector<std::string> map_names{"identity", "translation",
                                             "shear", "linear"};

    // Closed-form number current vs the volume-form linear solve.
    const ScalarFn n0 = random_smooth_scalar(rng, extent, 3, 1.0, 0.4);
    for (const std::string& map_name : map_names) {
        const SpatialMap map = builtin_map(map_name, mp, t);
        for (const std::string& bg_name : builtin_background_names()) {
            BackgroundParams bp;
            bp.extent = extent;
            const AdmBackground bg = builtin_background(bg_name, bp);
            const auto closed = number_current_from_map(map, n0, bg, grid);
            const auto oracle = four_form_oracle(map, n0, bg, grid);
            ErrAccum err;
            for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
                err.add(oracle.first(n), closed.first(n));
                for (int a = 0; a < 3; ++a) {
                    err.add(oracle.second.vec_at(n)[a],
                            closed.second.vec_at(n)[a]);
                }
            }
            out.push_back(make_check(
                "number_current[" + map_name + "," + bg_name + "]", err.rel(),
                1e-9));
        }
    }

    // Gauge-fixed pull-back identities on basis evaluations.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const std::string& map_name : map_names) {
        const SpatialMap map = builtin_map(map_name, mp, t);
        ErrAccum err_dt, err_dx, err_vol;
        const ScalarFn rho0 = random_smooth_scalar(rng, extent, 3, 2.0, 0.5);
        for (int s = 0; s < 24; ++s) {
            const Vec3 x{unit(rng), unit(rng), unit(rng)};
            const Mat3 jac = map.jacobian(x);
            const Vec3 hdot = map.time_derivative(x);
            const Vec3 y = map.forward(x);

            // Spacetime pushforwards: basis (t, 1, 2, 3).
            std::array<std::array<double, 4>, 4> push{};
            push[0][0] = 1.0;
            for (int c = 0; c < 3; ++c) push[0][c + 1] = hdot[c];
            for (int a = 0; a < 3; ++a) {
                for (int c = 0; c < 3; ++c) push[a + 1][c + 1] = jac(c, a);
            }

            // Pulled-back dt evaluates to dt on the basis.
            err_dt.add(push[0][0], 1.0);
            for (int a = 0; a < 3; ++a) err_dt.add(push[a + 1][0], 0.0);

            // Pulled-back dx^a: flow-velocity coefficient on the time leg,
            // Jacobian entries on the spatial legs.
            const Vec3 u_eul = map.time_derivative(map.inverse(y));
            for (int a = 0; a < 3; ++a) {
                err_dx.add(push[0][a + 1], u_eul[a]);
                for (int b = 0; b < 3; ++b) {
                    err_dx.add(push[b + 1][a + 1], jac(a, b));
                }
            }

            // Pulled-back spacetime volume: the 4x4 determinant of the
            // pushforwards against det(grad h) times the composed density.
            std::array<std::array<double, 4>, 4> cols{};
            for (int r = 0; r < 4; ++r) cols[r] = push[r];
            const double lhs = rho0(y) * det4(cols);
            const double rhs = map.det_jacobian(x) * rho0(y);
            err_vol.add(lhs, rhs);
        }
        out.push_back(
            make_check("pullback_dt[" + map_name + "]", err_dt.rel(), 1e-9));
        out.push_back(
            make_check("pullback_dx[" + map_name + "]", err_dx.rel(), 1e-9));
        out.push_back(make_check("pullback_volume[" + map_name + "]",
                                 err_vol.rel(), 1e-9));
    }

    // Pairing invariance <h^* w, v>(x) = <w, h_* v>(h(x)).
    for (const std::string& map_name : map_names) {
        const SpatialMap map = builtin_map(map_name, mp, t);
        const VectorFn v = random_smooth_vector(rng, extent, 3, 1.0);
        const VectorFn w = random_smooth_vector(rng, extent, 3, 1.0);
        const VectorFn pf = pushforward_vector(map, v);
        const VectorFn pb = pullback_oneform(map, w);
        ErrAccum err;
        for (int s = 0; s < 48; ++s) {
            const Vec3 x{unit(rng), unit(rng), unit(rng)};
            const Vec3 y = map.forward(x);
            err.add(dot(pb(x), v(x)), dot(w(y), pf(y)));
        }
        out.push_back(
            make_check("pairing[" + map_name + "]", err.rel(), 1e-9));
    }

    // Density pull-back preserves the total integral (periodic maps).
    for (const std::string& map_name :
         {std::string("identity"), std::string("translation"),
          std::string("shear")}) {
        const SpatialMap map = builtin_map(map_name, mp, t);
        const auto bump = [&](const Vec3& x) {
            double e = 0.0;
            for (int a = 0; a < 3; ++a) {
                e += std::cos(kTwoPi * (x[a] - 0.4) / extent[a]) - 1.0;
            }
            return std::exp(2.0 * e);
        };
        const ScalarFn pulled = pullback_density(map, bump);
        Field orig(grid, FieldKind::ScalarDensity);
        Field trans(grid, FieldKind::ScalarDensity);
        for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
            const Vec3 x = grid.node_point(n);
            orig(n) = bump(x);
            trans(n) = pulled(x);
        }
        const double i0 = integrate(orig);
        const double i1 = integrate(trans);
        out.push_back(make_check("density_integral[" + map_name + "]",
                                 std::abs(i1 - i0) / std::abs(i0), 1e-9));
    }
    return out;
}

std::vector<CheckResult> verify_eos(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<CheckResult> out;
    std::uniform_real_distribution<double> ndist(0.1, 5.0);

    const std::vector<Eos> members{
        Eos::dust(1.0),
        Eos::dust(2.5),
        Eos::polytrope(1.0, 2.0),
        Eos::polytrope(0.4, 5.0 / 3.0),
        Eos::linear_plus_polytrope(1.0, 0.1, 5.0 / 3.0),
        Eos::linear_plus_polytrope(0.8, 0.3, 2.2)};

    for (const Eos& eos : members) {
        ErrAccum err_d1, err_p, err_d2;
        bool positive = true;
        for (int s = 0; s < 40; ++s) {
            const double n = ndist(rng);
            const double h = 1e-5 * n;
            const double fd1 = (eos.rho(n + h) - eos.rho(n - h)) / (2.0 * h);
            err_d1.add(fd1, eos.drho_dn(n));
            const double fd2 =
                (eos.drho_dn(n + h) - eos.drho_dn(n - h)) / (2.0 * h);
            err_d2.add(fd2, eos.d2rho_dn2(n));
            // Pressure against the independent FD of rho.
            err_p.add(n * fd1 - eos.rho(n), eos.pressure(n));
            positive = positive && eos.drho_dn(n) > 0.0;
        }
        out.push_back(
            make_check("drho_dn_fd[" + eos.name() + "]", err_d1.rel(), 1e-8));
        out.push_back(make_check("d2rho_dn2_fd[" + eos.name() + "]",
                                 err_d2.rel(), 1e-8));
        const double p_scale = std::max(err_p.max_ref, 1.0);
        out.push_back(make_check("pressure_identity[" + eos.name() + "]",
                                 err_p.max_diff / p_scale, 1e-8));
        out.push_back(make_check("drho_dn_positive[" + eos.name() + "]",
                                 positive ? 0.0 : 1.0, 0.5));
    }
    return out;
}

std::vector<CheckResult> verify_recovery(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<CheckResult> out;
    const std::array<double, 3> extent{1.0, 1.0, 1.0};
    const Grid grid = Grid::make(3, {16, 16, 16}, extent);

    for (const std::string& bg_name : builtin_background_names()) {
        BackgroundParams bp;
        bp.extent = extent;
        const AdmBackground bg = builtin_background(bg_name, bp);
        for (int cfg = 0; cfg < 3; ++cfg) {
            const Eos eos = eos_for_config(cfg);
            const RandomFluid fluid =
                random_subluminal_fluid(rng, grid, bg, 0.9);
            const FluidState state =
                make_fluid_state(fluid.u, fluid.J0, bg, eos);
            const Field u_rec = velocity_recovery(state, bg, eos);
            const double err = max_abs_diff(u_rec, fluid.u);
            out.push_back(make_check(
                "recovery[" + bg_name + "," + eos.name() + "]", err, 1e-10));
        }
    }
    return out;
}

std::vector<CheckResult> verify_suite(const std::string& suite,
                                      std::uint64_t seed) {
    if (suite == "varderiv") return verify_varderiv(seed);
    if (suite == "pullback") return verify_pullback(seed);
    if (suite == "eos") return verify_eos(seed);
    if (suite == "recovery") return verify_recovery(seed);
    if (suite == "all") {
        std::vector<CheckResult> out;
        for (const char* s : {"eos", "pullback", "recovery", "varderiv"}) {
            auto part = verify_suite(s, seed);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    throw ConfigError("verify: unknown suite '" + suite + "'");
}

}  // namespace epadm
