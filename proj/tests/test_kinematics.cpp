#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "epadm/errors.hpp"
#include "epadm/kinematics.hpp"
#include "epadm/verify.hpp"

using namespace epadm;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

MapParams default_params() {
    MapParams mp;
    mp.velocity = {0.3, -0.2, 0.1};
    mp.amplitude = 0.06;
    Mat3 A = Mat3::identity();
    A(0, 0) = 1.2;
    A(0, 1) = 0.1;
    A(1, 1) = 0.9;
    A(2, 2) = 1.05;
    mp.linear = A;
    mp.linear_velocity = {0.05, 0.02, 0.0};
    return mp;
}

}  // namespace

TEST_CASE("builtin maps validate: inverse composition and Jacobian FD") {
    const Grid g = Grid::make(3, {8, 8, 8}, {1.0, 1.0, 1.0});
    for (const char* name : {"identity", "translation", "shear", "linear"}) {
        const SpatialMap map = builtin_map(name, default_params(), 0.7);
        validate_map(map, g, 1e-10, 1e-6);
    }
    CHECK_THROWS_AS(builtin_map("mobius", default_params(), 0.0), ConfigError);
}

TEST_CASE("pushforward: identity, translation, linear on constants") {
    const auto v = [](const Vec3&) { return Vec3{1.0, 2.0, -0.5}; };

    const SpatialMap id = builtin_map("identity", default_params(), 0.0);
    const Vec3 same = pushforward_vector(id, v)({0.2, 0.4, 0.6});
    CHECK(same[0] == doctest::Approx(1.0));
    CHECK(same[2] == doctest::Approx(-0.5));

    // Translation: components unchanged, field rigidly shifted.
    const SpatialMap tr = builtin_map("translation", default_params(), 1.0);
    const auto wave = [](const Vec3& x) {
        return Vec3{std::sin(kTwoPi * x[0]), 0.0, 0.0};
    };
    const Vec3 moved = pushforward_vector(tr, wave)({0.55, 0.0, 0.0});
    CHECK(moved[0] == doctest::Approx(std::sin(kTwoPi * (0.55 - 0.3))));

    const SpatialMap lin = builtin_map("linear", default_params(), 0.0);
    const Vec3 Av = pushforward_vector(lin, v)({0.3, 0.3, 0.3});
    CHECK(Av[0] == doctest::Approx(1.2 * 1.0 + 0.1 * 2.0));
    CHECK(Av[1] == doctest::Approx(0.9 * 2.0));
    CHECK(Av[2] == doctest::Approx(1.05 * -0.5));
}

TEST_CASE("pullback of a constant one-form through a linear map is A^T w") {
    const SpatialMap lin = builtin_map("linear", default_params(), 0.0);
    const auto w = [](const Vec3&) { return Vec3{0.5, -1.0, 2.0}; };
    const Vec3 pulled = pullback_oneform(lin, w)({0.1, 0.2, 0.3});
    CHECK(pulled[0] == doctest::Approx(1.2 * 0.5));
    CHECK(pulled[1] == doctest::Approx(0.1 * 0.5 + 0.9 * -1.0));
    CHECK(pulled[2] == doctest::Approx(1.05 * 2.0));
}

TEST_CASE("pullback_density: identity, translation, integral preservation") {
    const Grid g = Grid::make(2, {48, 48, 1}, {1.0, 1.0, 1.0});
    const auto bump = [](const Vec3& x) {
        return std::exp(2.0 * (std::cos(kTwoPi * (x[0] - 0.4)) +
                               std::cos(kTwoPi * (x[1] - 0.6)) - 2.0));
    };

    const SpatialMap id = builtin_map("identity", default_params(), 0.0);
    CHECK(pullback_density(id, bump)({0.3, 0.2, 0.0}) ==
          doctest::Approx(bump({0.3, 0.2, 0.0})));

    MapParams mp = default_params();
    for (const char* name : {"translation", "shear"}) {
        const SpatialMap map = builtin_map(name, mp, 0.8);
        const ScalarFn pulled = pullback_density(map, bump);
        Field orig(g, FieldKind::ScalarDensity), moved(g, FieldKind::ScalarDensity);
        for (std::size_t n = 0; n < g.num_nodes(); ++n) {
            orig(n) = bump(g.node_point(n));
            moved(n) = pulled(g.node_point(n));
        }
        CHECK(std::abs(integrate(moved) - integrate(orig)) /
                  std::abs(integrate(orig)) <
              1e-9);
    }
}

TEST_CASE("field-level transport wrappers sample the closures") {
    const Grid g = Grid::make(2, {32, 32, 1}, {1.0, 1.0, 1.0});
    MapParams mp = default_params();
    mp.velocity = {0.25, 0.0, 0.0};  // commensurate shift: 8 cells
    const SpatialMap tr = builtin_map("translation", mp, 1.0);

    Field v(g, FieldKind::Vector);
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        v(n, 0) = std::sin(kTwoPi * g.node_point(n)[0]);
        v(n, 1) = std::cos(kTwoPi * g.node_point(n)[1]);
    }
    const Field pushed = pushforward_vector(tr, v);
    double err = 0.0;
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        const Vec3 x = g.node_point(n);
        err = std::max(err, std::abs(pushed(n, 0) -
                                     std::sin(kTwoPi * (x[0] - 0.25))));
        err = std::max(err, std::abs(pushed(n, 1) - std::cos(kTwoPi * x[1])));
    }
    CHECK(err < 1e-12);  // node-exact shift needs no interpolation error
}

TEST_CASE("number current: identity and uniform translation flow") {
    const Grid g = Grid::make(3, {12, 12, 12}, {1.0, 1.0, 1.0});
    BackgroundParams bp;
    const AdmBackground mink = builtin_background("minkowski", bp);
    const ScalarFn one = [](const Vec3&) { return 1.0; };

    const SpatialMap id = builtin_map("identity", default_params(), 0.0);
    const auto [j0_id, ja_id] = number_current_from_map(id, one, mink, g);
    CHECK(max_abs(ja_id) == 0.0);
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        CHECK(j0_id(n) == doctest::Approx(1.0));
    }

    MapParams mp = default_params();
    mp.velocity = {0.3, -0.2, 0.1};
    const SpatialMap tr = builtin_map("translation", mp, 0.6);
    const auto [j0_tr, ja_tr] = number_current_from_map(tr, one, mink, g);
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        CHECK(j0_tr(n) == doctest::Approx(1.0));
        CHECK(ja_tr(n, 0) == doctest::Approx(0.3));
        CHECK(ja_tr(n, 1) == doctest::Approx(-0.2));
        CHECK(ja_tr(n, 2) == doctest::Approx(0.1));
    }

    const auto [j0_o, ja_o] = four_form_oracle(tr, one, mink, g);
    CHECK(max_abs_diff(j0_o, j0_tr) < 1e-12);
    CHECK(max_abs_diff(ja_o, ja_tr) < 1e-12);

    const ScalarFn bad = [](const Vec3&) { return -1.0; };
    CHECK_THROWS_AS(number_current_from_map(id, bad, mink, g), InvariantError);
}

TEST_CASE("transport oracle suite passes") {
    const auto results = verify_pullback(1234);
    for (const auto& r : results) {
        INFO(r.name, " err=", r.error);
        CHECK(r.pass);
    }
}

TEST_CASE("oracle agreement is seed independent") {
    const auto a = verify_pullback(1);
    const auto b = verify_pullback(99);
    CHECK(all_pass(a));
    CHECK(all_pass(b));
}
