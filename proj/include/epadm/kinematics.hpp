#pragma once

#include <string>
#include <utility>

#include "epadm/geometry.hpp"
#include "epadm/grid.hpp"
#include "epadm/tensor.hpp"

// Transport algebra for time-frozen spatial diffeomorphisms h with analytic
// inverse, Jacobian and label-space velocity hdot. Transported objects are
// closures; sampling onto grids happens at the call site. Evaluation-point
// conventions: the Jacobian is taken at the label point, transported fields
// are reported at the image point.

namespace epadm {

struct SpatialMap {
    std::string name;
    VectorFn forward;          // h(x)
    VectorFn inverse;          // h^{-1}(y)
    MatrixFn jacobian;         // J(x)(c,a) = d h^c / d x^a
    VectorFn time_derivative;  // hdot at the label point x

    double det_jacobian(const Vec3& x) const { return mat_det(jacobian(x)); }
};

// (h_* v)^c(y) = J^c_a(h^{-1}(y)) v^a(h^{-1}(y))
VectorFn pushforward_vector(const SpatialMap& map, VectorFn v);

// (h^* w)_a(x) = w_c(h(x)) J^c_a(x)
VectorFn pullback_oneform(const SpatialMap& map, VectorFn w);

// (h^* d)(x) = det J(x) d(h(x)); preserves the total integral.
ScalarFn pullback_density(const SpatialMap& map, ScalarFn d);

// Field-facing wrappers: inputs interpolated, outputs sampled on the grid.
Field pushforward_vector(const SpatialMap& map, const Field& v);
Field pullback_oneform(const SpatialMap& map, const Field& w);
Field pullback_density(const SpatialMap& map, const Field& d);

// Wrap a field into an interpolating closure.
ScalarFn field_scalar_closure(const Field& f);
VectorFn field_vector_closure(const Field& f);

// Number-density current (J0, Ja) on the grid from the reference density
// n0_tilde and the map, via the closed forms
//   J0(y) = n0(h^{-1}(y)) / (det J(h^{-1}(y)) * alpha sqrt(gamma)(y))
//   Ja(y) = J0(y) * hdot(h^{-1}(y))
// n0_tilde must be positive wherever evaluated.
std::pair<Field, Field> number_current_from_map(const SpatialMap& map,
                                                const ScalarFn& n0_tilde,
                                                const AdmBackground& bg,
                                                const Grid& grid);
std::pair<Field, Field> number_current_from_map(const SpatialMap& map,
                                                const Field& n0_tilde,
                                                const AdmBackground& bg);

// Independent route: solves the 4x4 determinant conditions obtained by
// pairing the spacetime volume form (coefficient alpha sqrt(gamma)) with the
// pushed-forward basis triples (all three spatial directions, then each
// triple with one spatial direction replaced by the time direction).
std::pair<Field, Field> four_form_oracle(const SpatialMap& map,
                                         const ScalarFn& n0_tilde,
                                         const AdmBackground& bg,
                                         const Grid& grid);
std::pair<Field, Field> four_form_oracle(const SpatialMap& map,
                                         const Field& n0_tilde,
                                         const AdmBackground& bg);

struct MapParams {
    std::array<double, 3> extent{1.0, 1.0, 1.0};
    Vec3 velocity{0.0, 0.0, 0.0};  // translation flow speed
    double amplitude = 0.05;       // shear amplitude
    Mat3 linear = Mat3::identity();
    Vec3 linear_velocity{0.0, 0.0, 0.0};
};

// Catalog: identity, translation (x + c t), shear
// (x + eps sin(2 pi y / L), y, z), linear (A x + c t on a non-periodic
// test patch). `t` freezes the flow at one instant.
SpatialMap builtin_map(const std::string& name, const MapParams& params,
                       double t);

// Forward/inverse composition and Jacobian-vs-FD consistency at sampled
// points; throws on failure.
void validate_map(const SpatialMap& map, const Grid& grid, double tol_inverse,
                  double tol_jacobian);

}  // namespace epadm
