#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "epadm/frames.hpp"
#include "epadm/geometry.hpp"
#include "epadm/kinematics.hpp"
#include "epadm/lagrangian.hpp"

// Seeded oracle suites behind `verify` and the acceptance gate. Each check
// compares a closed-form quantity against an independent route (central
// finite differences of the discrete Lagrangian, the volume-form linear
// system, round trips) and reports the worst relative error.

namespace epadm {

struct CheckResult {
    std::string name;
    double error = 0.0;
    double tol = 0.0;
    bool pass = false;
};

bool all_pass(const std::vector<CheckResult>& results);

// Smooth random periodic closures: a constant plus a few low-order Fourier
// modes with seeded amplitudes and phases. Analytic, so they can be
// evaluated at mapped points exactly.
ScalarFn random_smooth_scalar(std::mt19937_64& rng,
                              const std::array<double, 3>& extent, int dim,
                              double base, double amplitude);
VectorFn random_smooth_vector(std::mt19937_64& rng,
                              const std::array<double, 3>& extent, int dim,
                              double amplitude);

// Random fluid data on a grid: J0 = 1 + 0.3 * smooth and a velocity scaled
// so |beta + u|_gamma <= fraction * alpha at every node.
struct RandomFluid {
    Field u;
    Field J0;
};
RandomFluid random_subluminal_fluid(std::mt19937_64& rng, const Grid& grid,
                                    const AdmBackground& bg, double fraction);

// Perceived moving-frame data with |beta + o + (DO) u_tilde| similarly
// bounded at the image points.
RandomFluid random_subluminal_moving_fluid(std::mt19937_64& rng,
                                           const Grid& grid,
                                           const AdmBackground& bg,
                                           const FrameMotion& frame, double t,
                                           double fraction);

// Variational-derivative oracle: closed forms vs central finite differences
// of the per-node integrand (the discrete action is pointwise-local, so only
// the perturbed node's summand changes). Covers dl_du, dl_dJ0,
// stress_energy, the matter source terms, and the moving-frame derivatives
// for translation, shear and non-unit-determinant linear frames.
std::vector<CheckResult> verify_varderiv(std::uint64_t seed);

// Transport oracle: the closed-form number current against the 4x4
// volume-form solve on every builtin map x background, the gauge-fixed
// pull-back identities on basis evaluations, pairing invariance, and
// density-integral preservation.
std::vector<CheckResult> verify_pullback(std::uint64_t seed);

// rho' vs finite differences of rho and the pressure identity.
std::vector<CheckResult> verify_eos(std::uint64_t seed);

// dl_du followed by velocity recovery on random subluminal fields (up to
// 0.9 of the bound), every eos member on every builtin background.
std::vector<CheckResult> verify_recovery(std::uint64_t seed);

// suite in {varderiv, pullback, eos, recovery, all}.
std::vector<CheckResult> verify_suite(const std::string& suite,
                                      std::uint64_t seed);

}  // namespace epadm
