#include "epadm/lagrangian.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "epadm/errors.hpp"

namespace epadm {

EulerianFluid::EulerianFluid(Field u_in, Field j0_in)
    : u(std::move(u_in)), J0(std::move(j0_in)) {
    if (!u.grid().same_shape(J0.grid())) {
        throw ConfigError("EulerianFluid: u and J0 grids differ");
    }
}

double local_number_density(const LocalGeom& lg, const Vec3& u, double J0) {
    const Vec3 v = lg.beta + u;
    const double disc = lg.alpha * lg.alpha - sym_quad(lg.gamma, v, v);
    if (!(disc > 0.0)) {
        std::ostringstream os;
        os << "subluminal bound violated: alpha^2 - |beta+u|^2 = " << disc;
        throw InvariantError(os.str());
    }
    return J0 * std::sqrt(disc);
}

double local_lagrangian_density(const LocalGeom& lg, const Eos& eos,
                                const Vec3& u, double J0) {
    return -lg.vol * eos.rho(local_number_density(lg, u, J0));
}

Vec3 local_dl_du(const LocalGeom& lg, const Eos& eos, const Vec3& u,
                 double J0) {
    const double n = local_number_density(lg, u, J0);
    const Vec3 v = lg.beta + u;
    const double coef = lg.vol * eos.drho_dn(n) * J0 * J0 / n;
    return coef * sym_matvec(lg.gamma, v);
}

double local_dl_dJ0(const LocalGeom& lg, const Eos& eos, const Vec3& u,
                    double J0) {
    const double n = local_number_density(lg, u, J0);
    return -lg.vol * eos.drho_dn(n) * n / J0;
}

Sym3 local_stress_energy(const LocalGeom& lg, const Eos& eos, const Vec3& u,
                         double J0) {
    const double n = local_number_density(lg, u, J0);
    const double p = eos.pressure(n);
    const double coef = J0 * J0 / n * eos.drho_dn(n);
    const Vec3 v = lg.beta + u;
    Sym3 T;
    for (int a = 0; a < 3; ++a) {
        for (int b = a; b < 3; ++b) {
            T.set(a, b, p * lg.gamma_inv(a, b) + coef * v[a] * v[b]);
        }
    }
    return T;
}

double local_drho_dalpha(const LocalGeom& lg, const Eos& eos, const Vec3& u,
                         double J0) {
    const double n = local_number_density(lg, u, J0);
    return eos.drho_dn(n) * (J0 * J0 * lg.alpha / n - n / lg.alpha);
}

Vec3 local_drho_dbeta(const LocalGeom& lg, const Eos& eos, const Vec3& u,
                      double J0) {
    const double n = local_number_density(lg, u, J0);
    const double coef = -eos.drho_dn(n) * J0 * J0 / n;
    return coef * sym_matvec(lg.gamma, lg.beta + u);
}

namespace {

std::string node_label(const Grid& g, std::size_t node) {
    const auto c = g.coords(node);
    const Vec3 x = g.node_point(node);
    std::ostringstream os;
    os << "node (" << c[0] << "," << c[1] << "," << c[2] << "), x = (" << x[0]
       << "," << x[1] << "," << x[2] << ")";
    return os.str();
}

template <typename Fn>
void for_each_node(const EulerianFluid& fluid, const AdmBackground& bg,
                   Fn&& fn) {
    const Grid& g = fluid.u.grid();
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        const LocalGeom lg = local_geom(bg, g.node_point(n));
        try {
            fn(n, lg, fluid.u.vec_at(n), fluid.J0(n));
        } catch (const InvariantError& e) {
            throw InvariantError(std::string(e.what()) + " at " +
                                 node_label(g, n));
        }
    }
}

}  // namespace

Field number_density(const EulerianFluid& fluid, const AdmBackground& bg) {
    Field out(fluid.u.grid(), FieldKind::Scalar);
    for_each_node(fluid, bg,
                  [&](std::size_t n, const LocalGeom& lg, const Vec3& u,
                      double j0) { out(n) = local_number_density(lg, u, j0); });
    return out;
}

Field lagrangian_density(const EulerianFluid& fluid, const AdmBackground& bg,
                         const Eos& eos) {
    Field out(fluid.u.grid(), FieldKind::ScalarDensity);
    for_each_node(fluid, bg,
                  [&](std::size_t n, const LocalGeom& lg, const Vec3& u,
                      double j0) {
                      out(n) = local_lagrangian_density(lg, eos, u, j0);
                  });
    return out;
}

double lagrangian_total(const EulerianFluid& fluid, const AdmBackground& bg,
                        const Eos& eos) {
    return integrate(lagrangian_density(fluid, bg, eos));
}

Field dl_du(const EulerianFluid& fluid, const AdmBackground& bg,
            const Eos& eos) {
    Field out(fluid.u.grid(), FieldKind::OneFormDensity);
    for_each_node(fluid, bg,
                  [&](std::size_t n, const LocalGeom& lg, const Vec3& u,
                      double j0) { out.set_vec(n, local_dl_du(lg, eos, u, j0)); });
    return out;
}

Field dl_dJ0(const EulerianFluid& fluid, const AdmBackground& bg,
             const Eos& eos) {
    Field out(fluid.u.grid(), FieldKind::Scalar);
    for_each_node(fluid, bg,
                  [&](std::size_t n, const LocalGeom& lg, const Vec3& u,
                      double j0) { out(n) = local_dl_dJ0(lg, eos, u, j0); });
    return out;
}

Field stress_energy(const EulerianFluid& fluid, const AdmBackground& bg,
                    const Eos& eos) {
    Field out(fluid.u.grid(), FieldKind::SymTensor);
    for_each_node(fluid, bg,
                  [&](std::size_t n, const LocalGeom& lg, const Vec3& u,
                      double j0) {
                      out.set_sym(n, local_stress_energy(lg, eos, u, j0));
                  });
    return out;
}

MatterSources matter_source_terms(const EulerianFluid& fluid,
                                  const AdmBackground& bg, const Eos& eos) {
    MatterSources out{Field(fluid.u.grid(), FieldKind::Scalar),
                      Field(fluid.u.grid(), FieldKind::OneForm)};
    for_each_node(fluid, bg,
                  [&](std::size_t n, const LocalGeom& lg, const Vec3& u,
                      double j0) {
                      out.d_rho_d_alpha(n) = local_drho_dalpha(lg, eos, u, j0);
                      out.d_rho_d_beta.set_vec(n,
                                               local_drho_dbeta(lg, eos, u, j0));
                  });
    return out;
}

ConstraintResiduals constraint_residuals(const EulerianFluid& fluid,
                                         const AdmBackground& bg,
                                         const Eos& eos) {
    if (!bg.has_curvature_data()) {
        throw ConfigError("constraint_residuals: background lacks K_ab or R");
    }
    const Grid& g = fluid.u.grid();
    const std::size_t nn = g.num_nodes();

    // Full 3x3 component fields; only grid axes carry derivatives, but
    // off-grid-axis tensor components still enter the contractions.
    std::array<Field, 6> gamma_s{Field(g, FieldKind::Scalar), Field(g, FieldKind::Scalar),
                                 Field(g, FieldKind::Scalar), Field(g, FieldKind::Scalar),
                                 Field(g, FieldKind::Scalar), Field(g, FieldKind::Scalar)};
    // K^{ab} - gamma^{ab} K, upper indices.
    std::array<Field, 6> flux_s = gamma_s;
    Field kk_minus_k2(g, FieldKind::Scalar);
    Field ricci(g, FieldKind::Scalar);

    for (std::size_t n = 0; n < nn; ++n) {
        const Vec3 x = g.node_point(n);
        const LocalGeom lg = local_geom(bg, x);
        const Sym3 K = bg.extrinsic(x);
        ricci(n) = bg.ricci(x);

        // Raise indices on K and take traces.
        Sym3 K_up;
        double trK = 0.0, kk = 0.0;
        for (int a = 0; a < 3; ++a) {
            for (int b = a; b < 3; ++b) {
                double v = 0.0;
                for (int c = 0; c < 3; ++c)
                    for (int d = 0; d < 3; ++d)
                        v += lg.gamma_inv(a, c) * lg.gamma_inv(b, d) * K(c, d);
                K_up.set(a, b, v);
            }
        }
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                trK += lg.gamma_inv(a, b) * K(a, b);
                kk += K_up(a, b) * K(a, b);
            }
        kk_minus_k2(n) = kk - trK * trK;

        for (int c = 0; c < 6; ++c) gamma_s[c](n) = lg.gamma.s[c];
        Sym3 flux = K_up;
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b)
                flux.set(a, b, K_up(a, b) - lg.gamma_inv(a, b) * trK);
        for (int c = 0; c < 6; ++c) flux_s[c](n) = flux.s[c];
    }

    // d_c gamma_ab and d_c (K^{ab} - gamma^{ab} K) along grid axes.
    std::array<std::array<Field, 6>, 3> dgamma{
        {{Field(g, FieldKind::Scalar), Field(g, FieldKind::Scalar), Field(g, FieldKind::Scalar),
          Field(g, FieldKind::Scalar), Field(g, FieldKind::Scalar), Field(g, FieldKind::Scalar)},
         {Field(g, FieldKind::Scalar), Field(g, FieldKind::Scalar), Field(g, FieldKind::Scalar),
          Field(g, FieldKind::Scalar), Field(g, FieldKind::Scalar), Field(g, FieldKind::Scalar)},
         {Field(g, FieldKind::Scalar), Field(g, FieldKind::Scalar), Field(g, FieldKind::Scalar),
          Field(g, FieldKind::Scalar), Field(g, FieldKind::Scalar), Field(g, FieldKind::Scalar)}}};
    auto dflux = dgamma;
    for (int axis = 0; axis < g.dim(); ++axis) {
        for (int c = 0; c < 6; ++c) {
            dgamma[axis][c] = partial_derivative(gamma_s[c], axis);
            dflux[axis][c] = partial_derivative(flux_s[c], axis);
        }
    }

    ConstraintResiduals out{Field(g, FieldKind::Scalar),
                            Field(g, FieldKind::OneForm)};
    for (std::size_t n = 0; n < nn; ++n) {
        const Vec3 x = g.node_point(n);
        const LocalGeom lg = local_geom(bg, x);
        const Vec3 u = fluid.u.vec_at(n);
        const double j0 = fluid.J0(n);

        const double rho = eos.rho(local_number_density(lg, u, j0));
        const double src_alpha = local_drho_dalpha(lg, eos, u, j0);
        out.hamiltonian(n) =
            (kk_minus_k2(n) + ricci(n)) - (rho + lg.alpha * src_alpha);

        // Christoffel symbols from the differenced metric.
        std::array<Sym3, 3> dg;
        for (int c = 0; c < 3; ++c) {
            if (c < g.dim()) {
                for (int s = 0; s < 6; ++s) dg[c].s[s] = dgamma[c][s](n);
            } else {
                dg[c] = Sym3{};
            }
        }
        double chris[3][3][3];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c) {
                    double s = 0.0;
                    for (int d = 0; d < 3; ++d) {
                        s += lg.gamma_inv(a, d) *
                             (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
                    }
                    chris[a][b][c] = 0.5 * s;
                }

        // D_c T^{ac} = d_c T^{ac} + Gamma^a_{cd} T^{dc} + Gamma^c_{cd} T^{ad}
        Sym3 T;
        for (int s = 0; s < 6; ++s) T.s[s] = flux_s[s](n);
        Vec3 div = vzero();
        for (int a = 0; a < 3; ++a) {
            for (int c = 0; c < g.dim(); ++c) {
                div[a] += dflux[c][Sym3::index(a, c)](n);
            }
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    div[a] += chris[a][c][d] * T(d, c) + chris[c][c][d] * T(a, d);
                }
        }
        const Vec3 lhs_up = -2.0 * div;
        const Vec3 lhs_low = sym_matvec(lg.gamma, lhs_up);
        const Vec3 rhs = lg.alpha * local_drho_dbeta(lg, eos, u, j0);
        out.momentum.set_vec(n, lhs_low - rhs);
    }
    return out;
}

}  // namespace epadm
