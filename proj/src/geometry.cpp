#include "epadm/geometry.hpp"

#include <cmath>

#include "epadm/errors.hpp"

namespace epadm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Mat3 zero_mat() { return Mat3{}; }

std::array<Sym3, 3> zero_sym_grad() {
    return {Sym3{}, Sym3{}, Sym3{}};
}

}  // namespace

LocalGeom local_geom(const AdmBackground& bg, const Vec3& x) {
    return geom_from_values(bg.alpha(x), bg.beta(x), bg.gamma(x));
}

LocalGeom geom_from_values(double alpha, const Vec3& beta, const Sym3& gamma) {
    LocalGeom lg;
    lg.alpha = alpha;
    lg.beta = beta;
    lg.gamma = gamma;
    lg.gamma_inv = inverse_metric(gamma);
    lg.sqrt_gamma = std::sqrt(sym_det(gamma));
    lg.vol = alpha * lg.sqrt_gamma;
    return lg;
}

Sym3 inverse_metric(const Sym3& gamma) {
    if (!sym_positive_definite(gamma)) {
        throw InvariantError("inverse_metric: metric not positive definite");
    }
    return sym_inverse(gamma);
}

Field volume_element(const AdmBackground& bg, const Grid& grid) {
    Field out(grid, FieldKind::Scalar);
    for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
        const Vec3 x = grid.node_point(n);
        const double v = bg.alpha(x) * std::sqrt(sym_det(bg.gamma(x)));
        if (!(v > 0.0)) {
            throw InvariantError("volume_element: non-positive value");
        }
        out(n) = v;
    }
    return out;
}

AdmBackground builtin_background(const std::string& name,
                                 const BackgroundParams& params) {
    AdmBackground bg;
    bg.name = name;
    const std::array<double, 3> L = params.extent;
    const Vec3 k = {kTwoPi * params.mode[0] / L[0],
                    kTwoPi * params.mode[1] / L[1],
                    kTwoPi * params.mode[2] / L[2]};

    const auto flat_gamma = [](const Vec3&) { return Sym3::identity(); };
    const auto zero_vec = [](const Vec3&) { return vzero(); };
    const auto zero_scalar = [](const Vec3&) { return 0.0; };
    const auto zero_sym = [](const Vec3&) { return Sym3{}; };

    if (name == "minkowski") {
        bg.alpha = [](const Vec3&) { return 1.0; };
        bg.beta = zero_vec;
        bg.gamma = flat_gamma;
        bg.grad_alpha = zero_vec;
        bg.grad_beta = [](const Vec3&) { return zero_mat(); };
        bg.grad_gamma = [](const Vec3&) { return zero_sym_grad(); };
        bg.extrinsic = zero_sym;
        bg.ricci = zero_scalar;
        return bg;
    }

    if (name == "gauge_lapse") {
        const double A = params.amplitude;
        if (std::abs(A) >= 1.0) {
            throw ConfigError("gauge_lapse: |amplitude| must be below 1");
        }
        bg.alpha = [A, k](const Vec3& x) { return 1.0 + A * std::sin(dot(k, x)); };
        bg.beta = zero_vec;
        bg.gamma = flat_gamma;
        bg.grad_alpha = [A, k](const Vec3& x) {
            const double c = A * std::cos(dot(k, x));
            return Vec3{c * k[0], c * k[1], c * k[2]};
        };
        bg.grad_beta = [](const Vec3&) { return zero_mat(); };
        bg.grad_gamma = [](const Vec3&) { return zero_sym_grad(); };
        bg.extrinsic = zero_sym;
        bg.ricci = zero_scalar;
        return bg;
    }

    if (name == "shift_wind") {
        const Vec3 b0 = params.shift;
        const double w = params.shift_wave;
        bg.alpha = [](const Vec3&) { return 1.0; };
        // Constant wind plus an optional smooth transverse modulation of
        // beta^x along the k direction.
        bg.beta = [b0, w, k](const Vec3& x) {
            Vec3 b = b0;
            if (w != 0.0) b[0] += w * std::sin(dot(k, x));
            return b;
        };
        bg.gamma = flat_gamma;
        bg.grad_alpha = zero_vec;
        bg.grad_beta = [w, k](const Vec3& x) {
            Mat3 gb = zero_mat();
            if (w != 0.0) {
                const double c = w * std::cos(dot(k, x));
                for (int a = 0; a < 3; ++a) gb(a, 0) = c * k[a];
            }
            return gb;
        };
        bg.grad_gamma = [](const Vec3&) { return zero_sym_grad(); };
        bg.extrinsic = zero_sym;
        bg.ricci = zero_scalar;
        return bg;
    }

    if (name == "conformal") {
        const double A = params.amplitude;
        if (std::abs(A) >= 1.0) {
            throw ConfigError("conformal: |amplitude| must be below 1");
        }
        const auto psi = [A, k](const Vec3& x) {
            return 1.0 + A * std::cos(dot(k, x));
        };
        bg.alpha = [](const Vec3&) { return 1.0; };
        bg.beta = zero_vec;
        bg.gamma = [psi](const Vec3& x) {
            const double p4 = std::pow(psi(x), 4);
            return Sym3::diag(p4, p4, p4);
        };
        bg.grad_alpha = zero_vec;
        bg.grad_beta = [](const Vec3&) { return zero_mat(); };
        bg.grad_gamma = [psi, A, k](const Vec3& x) {
            const double p3 = std::pow(psi(x), 3);
            const double s = -A * std::sin(dot(k, x));
            std::array<Sym3, 3> gg = zero_sym_grad();
            for (int c = 0; c < 3; ++c) {
                const double d = 4.0 * p3 * s * k[c];
                gg[c] = Sym3::diag(d, d, d);
            }
            return gg;
        };
        bg.extrinsic = zero_sym;
        // Conformally flat slice: R = -8 psi^-5 lap(psi).
        bg.ricci = [psi, A, k](const Vec3& x) {
            const double lap_psi = -A * std::cos(dot(k, x)) * dot(k, k);
            return -8.0 * std::pow(psi(x), -5) * lap_psi;
        };
        return bg;
    }

    throw ConfigError("builtin_background: unknown name '" + name + "'");
}

void validate_background(const AdmBackground& bg, const Grid& grid) {
    for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
        const Vec3 x = grid.node_point(n);
        const double a = bg.alpha(x);
        if (!(a > 0.0)) {
            throw InvariantError("background: alpha <= 0 at node " +
                                 std::to_string(n));
        }
        if (!sym_positive_definite(bg.gamma(x))) {
            throw InvariantError("background: gamma not positive definite at node " +
                                 std::to_string(n));
        }
    }
}

}  // namespace epadm
