#include "epadm/kinematics.hpp"

#include <cmath>

#include "epadm/errors.hpp"

namespace epadm {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

VectorFn pushforward_vector(const SpatialMap& map, VectorFn v) {
    return [map, v = std::move(v)](const Vec3& y) {
        const Vec3 x = map.inverse(y);
        return matvec(map.jacobian(x), v(x));
    };
}

VectorFn pullback_oneform(const SpatialMap& map, VectorFn w) {
    return [map, w = std::move(w)](const Vec3& x) {
        return matvec_transpose(map.jacobian(x), w(map.forward(x)));
    };
}

ScalarFn pullback_density(const SpatialMap& map, ScalarFn d) {
    return [map, d = std::move(d)](const Vec3& x) {
        const double det = map.det_jacobian(x);
        if (!(det > 0.0)) {
            throw InvariantError("pullback_density: Jacobian not orientation preserving");
        }
        return det * d(map.forward(x));
    };
}

ScalarFn field_scalar_closure(const Field& f) {
    return [f](const Vec3& x) { return interpolate_scalar(f, x); };
}

VectorFn field_vector_closure(const Field& f) {
    return [f](const Vec3& x) { return interpolate_vec(f, x); };
}

namespace {

Field sample_scalar(const ScalarFn& fn, const Grid& g, FieldKind kind) {
    Field out(g, kind);
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        out(n) = fn(g.node_point(n));
    }
    return out;
}

Field sample_vector(const VectorFn& fn, const Grid& g, FieldKind kind) {
    Field out(g, kind);
    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        out.set_vec(n, fn(g.node_point(n)));
    }
    return out;
}

}  // namespace

Field pushforward_vector(const SpatialMap& map, const Field& v) {
    return sample_vector(pushforward_vector(map, field_vector_closure(v)),
                         v.grid(), v.kind());
}

Field pullback_oneform(const SpatialMap& map, const Field& w) {
    return sample_vector(pullback_oneform(map, field_vector_closure(w)),
                         w.grid(), w.kind());
}

Field pullback_density(const SpatialMap& map, const Field& d) {
    return sample_scalar(pullback_density(map, field_scalar_closure(d)),
                         d.grid(), d.kind());
}

std::pair<Field, Field> number_current_from_map(const SpatialMap& map,
                                                const ScalarFn& n0_tilde,
                                                const AdmBackground& bg,
                                                const Grid& grid) {
    Field j0(grid, FieldKind::ScalarDensity);
    Field ja(grid, FieldKind::Vector);
    for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
        const Vec3 y = grid.node_point(n);
        const Vec3 x = map.inverse(y);
        const double det = map.det_jacobian(x);
        if (!(det > 0.0)) {
            throw InvariantError("number_current_from_map: singular Jacobian");
        }
        const double n0 = n0_tilde(x);
        if (!(n0 > 0.0)) {
            throw InvariantError("number_current_from_map: n0_tilde must be positive");
        }
        const double vol = bg.alpha(y) * std::sqrt(sym_det(bg.gamma(y)));
        j0(n) = n0 / (det * vol);
        ja.set_vec(n, j0(n) * map.time_derivative(x));
    }
    return {std::move(j0), std::move(ja)};
}

std::pair<Field, Field> number_current_from_map(const SpatialMap& map,
                                                const Field& n0_tilde,
                                                const AdmBackground& bg) {
    return number_current_from_map(map, field_scalar_closure(n0_tilde), bg,
                                   n0_tilde.grid());
}

std::pair<Field, Field> four_form_oracle(const SpatialMap& map,
                                         const ScalarFn& n0_tilde,
                                         const AdmBackground& bg,
                                         const Grid& grid) {
    Field j0(grid, FieldKind::ScalarDensity);
    Field ja(grid, FieldKind::Vector);
    for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
        const Vec3 y = grid.node_point(n);
        const Vec3 x = map.inverse(y);
        const Mat3 jac = map.jacobian(x);
        const Vec3 hdot = map.time_derivative(x);
        const double vol = bg.alpha(y) * std::sqrt(sym_det(bg.gamma(y)));

        // Spacetime components ordered (t, 1, 2, 3). The pushed-forward
        // spatial basis vectors are horizontal; the pushed-forward time
        // direction carries the flow velocity.
        std::array<std::array<double, 4>, 4> basis{};
        for (int a = 0; a < 3; ++a) {
            basis[a][0] = 0.0;
            for (int c = 0; c < 3; ++c) basis[a][c + 1] = jac(c, a);
        }
        basis[3][0] = 1.0;
        for (int c = 0; c < 3; ++c) basis[3][c + 1] = hdot[c];

        // Row per basis triple; column mu holds vol * det4(e_mu, V, W, U).
        // Triples: (1,2,3) pairs with n0, and each (a,b,t) pairs with 0.
        const std::array<std::array<int, 3>, 4> triples = {
            {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
        std::array<std::array<double, 4>, 4> sys{};
        std::array<double, 4> rhs{};
        for (int row = 0; row < 4; ++row) {
            for (int mu = 0; mu < 4; ++mu) {
                std::array<std::array<double, 4>, 4> det_cols{};
                det_cols[0][mu] = 1.0;
                for (int k = 0; k < 3; ++k) det_cols[k + 1] = basis[triples[row][k]];
                sys[row][mu] = vol * det4(det_cols);
            }
            rhs[row] = (row == 0) ? n0_tilde(x) : 0.0;
        }
        const auto sol = solve4(sys, rhs);
        j0(n) = sol[0];
        ja.set_vec(n, {sol[1], sol[2], sol[3]});
    }
    return {std::move(j0), std::move(ja)};
}

std::pair<Field, Field> four_form_oracle(const SpatialMap& map,
                                         const Field& n0_tilde,
                                         const AdmBackground& bg) {
    return four_form_oracle(map, field_scalar_closure(n0_tilde), bg,
                            n0_tilde.grid());
}

SpatialMap builtin_map(const std::string& name, const MapParams& params,
                       double t) {
    SpatialMap map;
    map.name = name;

    if (name == "identity") {
        map.forward = [](const Vec3& x) { return x; };
        map.inverse = [](const Vec3& x) { return x; };
        map.jacobian = [](const Vec3&) { return Mat3::identity(); };
        map.time_derivative = [](const Vec3&) { return vzero(); };
        return map;
    }

    if (name == "translation") {
        const Vec3 c = params.velocity;
        const Vec3 off = t * c;
        map.forward = [off](const Vec3& x) { return x + off; };
        map.inverse = [off](const Vec3& y) { return y - off; };
        map.jacobian = [](const Vec3&) { return Mat3::identity(); };
        map.time_derivative = [c](const Vec3&) { return c; };
        return map;
    }

    if (name == "shear") {
        // h(x, y, z) = (x + eps sin(2 pi y / L), y, z); unit Jacobian
        // determinant, exact inverse since y is preserved.
        const double eps = params.amplitude;
        const double ky = kTwoPi / params.extent[1];
        map.forward = [eps, ky](const Vec3& x) {
            return Vec3{x[0] + eps * std::sin(ky * x[1]), x[1], x[2]};
        };
        map.inverse = [eps, ky](const Vec3& y) {
            return Vec3{y[0] - eps * std::sin(ky * y[1]), y[1], y[2]};
        };
        map.jacobian = [eps, ky](const Vec3& x) {
            Mat3 j = Mat3::identity();
            j(0, 1) = eps * ky * std::cos(ky * x[1]);
            return j;
        };
        map.time_derivative = [](const Vec3&) { return vzero(); };
        return map;
    }

    if (name == "linear") {
        // Affine flow y = A x + c t on a non-periodic test patch.
        const Mat3 A = params.linear;
        const Mat3 Ainv = mat_inverse(A);
        const Vec3 off = t * params.linear_velocity;
        const Vec3 c = params.linear_velocity;
        if (!(mat_det(A) > 0.0)) {
            throw ConfigError("linear map must be orientation preserving");
        }
        map.forward = [A, off](const Vec3& x) { return matvec(A, x) + off; };
        map.inverse = [Ainv, off](const Vec3& y) { return matvec(Ainv, y - off); };
        map.jacobian = [A](const Vec3&) { return A; };
        map.time_derivative = [c](const Vec3&) { return c; };
        return map;
    }

    throw ConfigError("builtin_map: unknown name '" + name + "'");
}

void validate_map(const SpatialMap& map, const Grid& grid, double tol_inverse,
                  double tol_jacobian) {
    const std::size_t stride = std::max<std::size_t>(1, grid.num_nodes() / 64);
    for (std::size_t n = 0; n < grid.num_nodes(); n += stride) {
        const Vec3 x = grid.node_point(n);
        const Vec3 round_trip = map.inverse(map.forward(x));
        for (int a = 0; a < 3; ++a) {
            if (std::abs(round_trip[a] - x[a]) > tol_inverse) {
                throw InvariantError("map '" + map.name +
                                     "': inverse composition failed");
            }
        }
        if (!(map.det_jacobian(x) > 0.0)) {
            throw InvariantError("map '" + map.name +
                                 "': non-positive Jacobian determinant");
        }
        // Centered FD of the forward map against the supplied Jacobian.
        const double h = 1e-6;
        const Mat3 jac = map.jacobian(x);
        for (int a = 0; a < 3; ++a) {
            Vec3 xp = x, xm = x;
            xp[a] += h;
            xm[a] -= h;
            const Vec3 fp = map.forward(xp);
            const Vec3 fm = map.forward(xm);
            for (int c = 0; c < 3; ++c) {
                const double fd = (fp[c] - fm[c]) / (2.0 * h);
                if (std::abs(fd - jac(c, a)) > tol_jacobian) {
                    throw InvariantError("map '" + map.name +
                                         "': Jacobian mismatch with FD");
                }
            }
        }
    }
}

}  // namespace epadm
