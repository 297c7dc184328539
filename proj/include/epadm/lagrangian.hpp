#pragma once

#include <utility>

#include "epadm/eos.hpp"
#include "epadm/geometry.hpp"
#include "epadm/grid.hpp"

// Reduced fluid Lagrangian and its closed-form variational derivatives:
// number density, Lagrangian density, momentum dl/du, dl/dJ0, stress-energy
// tensor, and the matter source terms entering the constraint residuals.
//
// Everything funnels through the pointwise functions below; the grid-level
// operations and the finite-difference verification suite differentiate the
// same per-node integrand.

namespace epadm {

// Evolvable Eulerian data: spatial velocity u^a and the advected density J0.
struct EulerianFluid {
    Field u;   // Vector
    Field J0;  // ScalarDensity, positive

    EulerianFluid(Field u_in, Field j0_in);
};

// n = J0 sqrt(alpha^2 - gamma_ab (beta+u)^a (beta+u)^b).
// Throws InvariantError when the subluminal bound fails.
double local_number_density(const LocalGeom& lg, const Vec3& u, double J0);

// Integrand -alpha sqrt(gamma) rho(n); the discrete Lagrangian is the
// cell-volume-weighted sum of this over nodes.
double local_lagrangian_density(const LocalGeom& lg, const Eos& eos,
                                const Vec3& u, double J0);

// dl/du^a = alpha sqrt(gamma) rho'(n) (J0)^2 / n * gamma_ab (beta+u)^b
Vec3 local_dl_du(const LocalGeom& lg, const Eos& eos, const Vec3& u,
                 double J0);

// dl/dJ0 = -alpha sqrt(gamma) rho'(n) n / J0 = -alpha sqrt(gamma) (p+rho)/J0
double local_dl_dJ0(const LocalGeom& lg, const Eos& eos, const Vec3& u,
                    double J0);

// T^ab = p gamma^ab + (J0)^2/n rho'(n) (beta+u)^a (beta+u)^b
Sym3 local_stress_energy(const LocalGeom& lg, const Eos& eos, const Vec3& u,
                         double J0);

// drho/dalpha = rho'(n) ((J0)^2 alpha / n - n / alpha); the variation holds
// the fluid map fixed, so J0 scales as 1/alpha.
double local_drho_dalpha(const LocalGeom& lg, const Eos& eos, const Vec3& u,
                         double J0);

// drho/dbeta^a = -rho'(n) (J0)^2 / n * gamma_ab (beta+u)^b
Vec3 local_drho_dbeta(const LocalGeom& lg, const Eos& eos, const Vec3& u,
                      double J0);

Field number_density(const EulerianFluid& fluid, const AdmBackground& bg);
Field lagrangian_density(const EulerianFluid& fluid, const AdmBackground& bg,
                         const Eos& eos);
double lagrangian_total(const EulerianFluid& fluid, const AdmBackground& bg,
                        const Eos& eos);
Field dl_du(const EulerianFluid& fluid, const AdmBackground& bg,
            const Eos& eos);
Field dl_dJ0(const EulerianFluid& fluid, const AdmBackground& bg,
             const Eos& eos);
Field stress_energy(const EulerianFluid& fluid, const AdmBackground& bg,
                    const Eos& eos);

struct MatterSources {
    Field d_rho_d_alpha;  // Scalar
    Field d_rho_d_beta;   // OneForm
};
MatterSources matter_source_terms(const EulerianFluid& fluid,
                                  const AdmBackground& bg, const Eos& eos);

// Hamiltonian and momentum constraint residuals (LHS - RHS), reported as
// diagnostics only. Requires K_ab and R on the background. The momentum
// residual is lowered with gamma so both sides carry a covariant index.
// The Levi-Civita divergence uses Christoffel symbols finite-differenced
// from the sampled metric at the grid's FD order.
struct ConstraintResiduals {
    Field hamiltonian;  // Scalar
    Field momentum;     // OneForm
};
ConstraintResiduals constraint_residuals(const EulerianFluid& fluid,
                                         const AdmBackground& bg,
                                         const Eos& eos);

}  // namespace epadm
