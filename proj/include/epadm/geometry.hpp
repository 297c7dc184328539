#pragma once

#include <array>
#include <functional>
#include <string>

#include "epadm/grid.hpp"
#include "epadm/tensor.hpp"

// Prescribed spatial-slice backgrounds: lapse alpha > 0, shift vector beta,
// positive-definite spatial metric gamma, optional extrinsic curvature K and
// Ricci scalar R. Backgrounds are analytic closures (with analytic first
// derivatives) so they can be evaluated at mapped points exactly; grid
// sampling happens only at the edges. The background is held fixed in time;
// geometry is never evolved here.

namespace epadm {

using ScalarFn = std::function<double(const Vec3&)>;
using VectorFn = std::function<Vec3(const Vec3&)>;
using SymFn = std::function<Sym3(const Vec3&)>;
// grad_beta(x)(a,b) = d_a beta^b
using MatrixFn = std::function<Mat3(const Vec3&)>;
// grad_gamma(x)[c](a,b) = d_c gamma_ab
using SymGradFn = std::function<std::array<Sym3, 3>(const Vec3&)>;

struct AdmBackground {
    std::string name;
    ScalarFn alpha;
    VectorFn beta;
    SymFn gamma;
    VectorFn grad_alpha;
    MatrixFn grad_beta;
    SymGradFn grad_gamma;
    SymFn extrinsic;  // K_ab; empty when not supplied
    ScalarFn ricci;   // R; empty when not supplied

    bool has_curvature_data() const {
        return static_cast<bool>(extrinsic) && static_cast<bool>(ricci);
    }
};

// Pointwise metric data shared by the fluid algebra.
struct LocalGeom {
    double alpha;
    Vec3 beta;
    Sym3 gamma;
    Sym3 gamma_inv;
    double sqrt_gamma;
    double vol;  // alpha * sqrt(gamma)
};

LocalGeom local_geom(const AdmBackground& bg, const Vec3& x);

// Assembles the derived members from raw values; used wherever sampled
// metric data is perturbed independently of the closures.
LocalGeom geom_from_values(double alpha, const Vec3& beta, const Sym3& gamma);

// gamma^{ac} gamma_cb = delta to round-off; throws on non-SPD input.
Sym3 inverse_metric(const Sym3& gamma);

inline Vec3 lower_index(const Sym3& gamma, const Vec3& v) {
    return sym_matvec(gamma, v);
}
inline Vec3 raise_index(const Sym3& gamma, const Vec3& w) {
    return sym_matvec(sym_inverse(gamma), w);
}

// alpha * sqrt(det gamma) sampled on the grid; strictly positive.
Field volume_element(const AdmBackground& bg, const Grid& grid);

struct BackgroundParams {
    std::array<double, 3> extent{1.0, 1.0, 1.0};
    double amplitude = 0.1;                 // lapse / conformal perturbation
    std::array<int, 3> mode{1, 0, 0};       // integer wavenumbers
    Vec3 shift{0.3, 0.0, 0.0};              // shift_wind constant part
    double shift_wave = 0.0;                // shift_wind sinusoidal part
};

// name in {minkowski, gauge_lapse, shift_wind, conformal}.
// All builtins carry K_ab = 0 and an analytic R (zero for flat gamma,
// -8 psi^-5 lap(psi) for the conformal metric).
AdmBackground builtin_background(const std::string& name,
                                 const BackgroundParams& params);

// Checks alpha > 0 and gamma positive definite at every node.
void validate_background(const AdmBackground& bg, const Grid& grid);

}  // namespace epadm
