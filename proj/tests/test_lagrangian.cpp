#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "epadm/errors.hpp"
#include "epadm/lagrangian.hpp"
#include "epadm/verify.hpp"

using namespace epadm;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

LocalGeom minkowski_point() {
    return geom_from_values(1.0, vzero(), Sym3::identity());
}

EulerianFluid uniform_fluid(const Grid& g, const Vec3& u, double j0) {
    Field uf(g, FieldKind::Vector);
    Field jf(g, FieldKind::ScalarDensity);
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        uf.set_vec(n, u);
        jf(n) = j0;
    }
    return EulerianFluid(std::move(uf), std::move(jf));
}

}  // namespace

TEST_CASE("number density closed-form values") {
    const LocalGeom mink = minkowski_point();
    CHECK(local_number_density(mink, vzero(), 1.0) == doctest::Approx(1.0));
    CHECK(local_number_density(mink, {0.6, 0.0, 0.0}, 1.0) ==
          doctest::Approx(0.8));

    // Shift wind cancelled by the velocity: n = J0 alpha.
    const LocalGeom wind =
        geom_from_values(1.0, {0.3, 0.0, 0.0}, Sym3::identity());
    CHECK(local_number_density(wind, {-0.3, 0.0, 0.0}, 2.0) ==
          doctest::Approx(2.0));

    CHECK_THROWS_AS(local_number_density(mink, {1.1, 0.0, 0.0}, 1.0),
                    InvariantError);
}

TEST_CASE("number density is degree-1 homogeneous in J0") {
    const LocalGeom lg =
        geom_from_values(1.2, {0.1, 0.0, 0.0}, Sym3::diag(1.1, 0.9, 1.0));
    const Vec3 u{0.2, -0.1, 0.05};
    const double n1 = local_number_density(lg, u, 0.7);
    const double n2 = local_number_density(lg, u, 1.4);
    CHECK(n2 == doctest::Approx(2.0 * n1).epsilon(1e-14));
}

TEST_CASE("field-level number density reports the violating node") {
    const Grid g = Grid::make(1, {16, 1, 1}, {1.0, 1.0, 1.0});
    EulerianFluid fluid = uniform_fluid(g, vzero(), 1.0);
    fluid.u(5, 0) = 1.5;  // superluminal at one node
    BackgroundParams bp;
    const AdmBackground mink = builtin_background("minkowski", bp);
    CHECK_THROWS_WITH_AS(number_density(fluid, mink),
                         doctest::Contains("node (5,0,0)"), InvariantError);
}

TEST_CASE("Lagrangian density: dust at rest") {
    const Grid g = Grid::make(2, {16, 16, 1}, {1.0, 2.0, 1.0});
    BackgroundParams bp;
    const AdmBackground mink = builtin_background("minkowski", bp);
    const Eos dust = Eos::dust(1.0);
    const EulerianFluid fluid = uniform_fluid(g, vzero(), 1.0);
    // l = -V for unit density dust at rest in a box of volume V = 2.
    CHECK(lagrangian_total(fluid, mink, dust) == doctest::Approx(-2.0));

    // Doubled lapse: n = J0 alpha = 2, l = -2 rho(2) V.
    AdmBackground doubled = mink;
    doubled.alpha = [](const Vec3&) { return 2.0; };
    CHECK(lagrangian_total(fluid, doubled, dust) ==
          doctest::Approx(-2.0 * 2.0 * 2.0));
}

TEST_CASE("dl_du closed-form values and parallelism to beta+u") {
    const LocalGeom mink = minkowski_point();
    const Eos dust = Eos::dust(1.0);

    // Vanishes iff beta + u = 0.
    const Vec3 zero = local_dl_du(mink, dust, vzero(), 1.0);
    CHECK(std::sqrt(dot(zero, zero)) == 0.0);

    const Vec3 m = local_dl_du(mink, dust, {0.6, 0.0, 0.0}, 1.0);
    CHECK(m[0] == doctest::Approx(0.75));
    CHECK(m[1] == 0.0);

    // gamma^{ab} m_b is parallel to beta+u with a positive factor.
    const LocalGeom lg =
        geom_from_values(1.1, {0.05, -0.1, 0.0}, Sym3::diag(1.2, 0.9, 1.0));
    const Eos lpp = Eos::linear_plus_polytrope(1.0, 0.1, 5.0 / 3.0);
    const Vec3 u{0.3, 0.2, -0.1};
    const Vec3 mm = local_dl_du(lg, lpp, u, 0.8);
    const Vec3 raised = sym_matvec(lg.gamma_inv, mm);
    const Vec3 v = lg.beta + u;
    const double cross01 = raised[0] * v[1] - raised[1] * v[0];
    const double cross12 = raised[1] * v[2] - raised[2] * v[1];
    CHECK(std::abs(cross01) < 1e-14);
    CHECK(std::abs(cross12) < 1e-14);
    CHECK(dot(raised, v) > 0.0);
}

TEST_CASE("dl_dJ0: both algebraic forms agree; dust scaling invariance") {
    const LocalGeom mink = minkowski_point();
    const Eos dust = Eos::dust(1.0);
    CHECK(local_dl_dJ0(mink, dust, vzero(), 1.0) == doctest::Approx(-1.0));
    // n/J0 is unchanged under J0 scaling at fixed u.
    CHECK(local_dl_dJ0(mink, dust, vzero(), 2.0) == doctest::Approx(-1.0));

    // -vol rho' n / J0 against -vol (p+rho)/J0 across the family.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(0.2, 1.5);
    const Eos members[] = {Eos::dust(1.3), Eos::polytrope(0.4, 5.0 / 3.0),
                           Eos::linear_plus_polytrope(1.0, 0.1, 5.0 / 3.0)};
    for (const Eos& eos : members) {
        for (int trial = 0; trial < 20; ++trial) {
            const double j0 = dist(rng);
            const Vec3 u{0.3 * dist(rng) - 0.3, 0.0, 0.0};
            const double n = local_number_density(mink, u, j0);
            const double a = -eos.drho_dn(n) * n / j0;
            const double b = -(eos.pressure(n) + eos.rho(n)) / j0;
            CHECK(a == doctest::Approx(b).epsilon(1e-13));
            CHECK(local_dl_dJ0(mink, eos, u, j0) == doctest::Approx(a));
        }
    }
}

TEST_CASE("stress energy closed-form values") {
    const LocalGeom mink = minkowski_point();
    const Eos dust = Eos::dust(1.0);
    const Sym3 zero = local_stress_energy(mink, dust, vzero(), 1.0);
    for (double c : zero.s) CHECK(c == doctest::Approx(0.0));

    // Polytrope at rest with J0 = n = 2: T^ab = p gamma^ab = 4 delta.
    const Eos poly = Eos::polytrope(1.0, 2.0);
    const Sym3 T = local_stress_energy(mink, poly, vzero(), 2.0);
    CHECK(T(0, 0) == doctest::Approx(4.0));
    CHECK(T(1, 1) == doctest::Approx(4.0));
    CHECK(T(2, 2) == doctest::Approx(4.0));
    CHECK(T(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("matter source terms at cancelled shift") {
    const LocalGeom wind =
        geom_from_values(1.0, {0.3, 0.0, 0.0}, Sym3::identity());
    const Eos dust = Eos::dust(1.0);
    const Vec3 u{-0.3, 0.0, 0.0};
    CHECK(local_drho_dalpha(wind, dust, u, 1.0) == doctest::Approx(0.0));
    const Vec3 db = local_drho_dbeta(wind, dust, u, 1.0);
    CHECK(std::sqrt(dot(db, db)) == doctest::Approx(0.0));
}

TEST_CASE("drho_dbeta is -(1/vol) dl_du") {
    const LocalGeom lg =
        geom_from_values(1.2, {0.1, 0.05, 0.0}, Sym3::diag(1.3, 0.8, 1.0));
    const Eos lpp = Eos::linear_plus_polytrope(1.0, 0.2, 1.8);
    const Vec3 u{0.25, -0.15, 0.1};
    const Vec3 db = local_drho_dbeta(lg, lpp, u, 0.9);
    const Vec3 m = local_dl_du(lg, lpp, u, 0.9);
    for (int a = 0; a < 3; ++a) {
        CHECK(db[a] == doctest::Approx(-m[a] / lg.vol).epsilon(1e-13));
    }
}

TEST_CASE("variational-derivative oracle suite passes") {
    const auto results = verify_varderiv(777);
    for (const auto& r : results) {
        INFO(r.name, " err=", r.error);
        CHECK(r.pass);
    }
}

TEST_CASE("constraint residuals: flat vacuum, dust at rest, curved reference") {
    BackgroundParams bp;
    const Eos dust = Eos::dust(1.0);

    // Near-vacuum on a flat background: residuals at the atmosphere scale.
    {
        const Grid g = Grid::make(2, {16, 16, 1}, {1.0, 1.0, 1.0});
        const AdmBackground mink = builtin_background("minkowski", bp);
        Field u(g, FieldKind::Vector);
        Field j0(g, FieldKind::ScalarDensity);
        j0.fill(1e-12);
        const ConstraintResiduals res =
            constraint_residuals(EulerianFluid(u, j0), mink, dust);
        CHECK(max_abs(res.hamiltonian) < 1e-11);
        CHECK(max_abs(res.momentum) < 1e-11);
    }

    // Dust at rest on flat space: hamiltonian residual -rho, momentum 0.
    {
        const Grid g = Grid::make(2, {16, 16, 1}, {1.0, 1.0, 1.0});
        const AdmBackground mink = builtin_background("minkowski", bp);
        const EulerianFluid fluid = uniform_fluid(g, vzero(), 1.0);
        const ConstraintResiduals res =
            constraint_residuals(fluid, mink, dust);
        for (std::size_t n = 0; n < g.num_nodes(); ++n) {
            CHECK(res.hamiltonian(n) == doctest::Approx(-1.0));
        }
        CHECK(max_abs(res.momentum) < 1e-13);
    }

    // Conformal background with an analytic conformal extrinsic curvature
    // K_ab = kappa(x) gamma_ab: the Levi-Civita divergence reduces to
    // -2 D_b(-2 kappa gamma^{ab}) = 4 gamma^{ab} d_b kappa, so the momentum
    // residual has the closed form 4 d_a kappa - alpha drho/dbeta^a. The
    // FD-Christoffel route must converge to it at the grid's order.
    {
        bp.amplitude = 0.05;
        const double B = 0.02;
        const auto kappa = [B](const Vec3& x) {
            return B * std::cos(kTwoPi * x[0]);
        };
        const auto dkappa = [B](const Vec3& x) {
            return -B * kTwoPi * std::sin(kTwoPi * x[0]);
        };
        const auto residual_error = [&](int npts) {
            const Grid g = Grid::make(2, {npts, npts, 1}, {1.0, 1.0, 1.0});
            AdmBackground bg = builtin_background("conformal", bp);
            const SymFn gamma = bg.gamma;
            bg.extrinsic = [kappa, gamma](const Vec3& x) {
                Sym3 K = gamma(x);
                const double k = kappa(x);
                for (double& c : K.s) c *= k;
                return K;
            };
            const EulerianFluid fluid = uniform_fluid(g, vzero(), 1.0);
            const ConstraintResiduals res =
                constraint_residuals(fluid, bg, dust);
            double err = 0.0;
            for (std::size_t n = 0; n < g.num_nodes(); ++n) {
                const Vec3 x = g.node_point(n);
                const LocalGeom lg = local_geom(bg, x);
                // Hamiltonian: K_ab K^ab - K^2 = -6 kappa^2 for K = kappa gamma.
                const double ham_exact =
                    -6.0 * kappa(x) * kappa(x) + bg.ricci(x) -
                    (dust.rho(local_number_density(lg, vzero(), 1.0)) +
                     lg.alpha * local_drho_dalpha(lg, dust, vzero(), 1.0));
                err = std::max(err, std::abs(res.hamiltonian(n) - ham_exact));
                const Vec3 db = local_drho_dbeta(lg, dust, vzero(), 1.0);
                const double mom_exact = 4.0 * dkappa(x) - lg.alpha * db[0];
                err = std::max(err, std::abs(res.momentum(n, 0) - mom_exact));
            }
            return err;
        };
        const double e1 = residual_error(24);
        const double e2 = residual_error(48);
        CHECK(std::log2(e1 / e2) > 3.5);
        CHECK(e2 < 1e-6);
    }

    // Missing curvature data is a configuration error.
    {
        const Grid g = Grid::make(1, {16, 1, 1}, {1.0, 1.0, 1.0});
        AdmBackground bare = builtin_background("minkowski", bp);
        bare.extrinsic = nullptr;
        bare.ricci = nullptr;
        const EulerianFluid fluid = uniform_fluid(g, vzero(), 1.0);
        CHECK_THROWS_AS(constraint_residuals(fluid, bare, dust), ConfigError);
    }
}
