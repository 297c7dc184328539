#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "epadm/tensor.hpp"

// Periodic uniform Cartesian grid in 1, 2 or 3 dimensions with flat field
// storage (row-major nodes, components innermost), central finite
// differences, tensor-product interpolation and deterministic quadrature.

namespace epadm {

class Grid {
public:
    static Grid make(int dim, std::array<int, 3> points,
                     std::array<double, 3> extent, int fd_order = 4,
                     int interp_order = 3);

    int dim() const { return dim_; }
    int points(int axis) const { return points_[axis]; }
    double extent(int axis) const { return extent_[axis]; }
    double spacing(int axis) const { return spacing_[axis]; }
    int fd_order() const { return fd_order_; }
    int interp_order() const { return interp_order_; }

    std::size_t num_nodes() const { return num_nodes_; }
    double cell_volume() const { return cell_volume_; }
    double min_spacing() const;

    std::size_t flat(int i0, int i1, int i2) const {
        return (static_cast<std::size_t>(i0) * points_[1] + i1) * points_[2] +
               i2;
    }

    std::array<int, 3> coords(std::size_t node) const {
        const int i2 = static_cast<int>(node % points_[2]);
        const std::size_t r = node / points_[2];
        const int i1 = static_cast<int>(r % points_[1]);
        const int i0 = static_cast<int>(r / points_[1]);
        return {i0, i1, i2};
    }

    Vec3 node_point(std::size_t node) const {
        const auto c = coords(node);
        return {c[0] * spacing_[0], c[1] * spacing_[1], c[2] * spacing_[2]};
    }

    // Reduce a coordinate into the fundamental domain [0, extent).
    double wrap_coord(double x, int axis) const;
    Vec3 wrap_point(const Vec3& x) const;

    bool same_shape(const Grid& other) const {
        return dim_ == other.dim_ && points_ == other.points_ &&
               extent_ == other.extent_;
    }

private:
    Grid() = default;

    int dim_ = 0;
    std::array<int, 3> points_{1, 1, 1};
    std::array<double, 3> extent_{1.0, 1.0, 1.0};
    std::array<double, 3> spacing_{1.0, 1.0, 1.0};
    std::size_t num_nodes_ = 0;
    double cell_volume_ = 1.0;
    int fd_order_ = 4;
    int interp_order_ = 3;
};

enum class FieldKind {
    Scalar,
    ScalarDensity,
    Vector,
    OneForm,
    OneFormDensity,
    SymTensor,
};

int components_for(FieldKind kind, int dim);
std::string field_kind_name(FieldKind kind);

// Grid-attached field. Storage is node-major with components innermost.
// Vector-like kinds hold dim components; helpers pad to Vec3 with zeros.
class Field {
public:
    Field(const Grid& grid, FieldKind kind);

    const Grid& grid() const { return grid_; }
    FieldKind kind() const { return kind_; }
    int ncomp() const { return ncomp_; }
    std::size_t num_nodes() const { return grid_.num_nodes(); }

    double operator()(std::size_t node, int c = 0) const {
        return data_[node * ncomp_ + c];
    }
    double& operator()(std::size_t node, int c = 0) {
        return data_[node * ncomp_ + c];
    }

    Vec3 vec_at(std::size_t node) const {
        Vec3 v = vzero();
        for (int c = 0; c < ncomp_ && c < 3; ++c) v[c] = (*this)(node, c);
        return v;
    }
    void set_vec(std::size_t node, const Vec3& v) {
        for (int c = 0; c < ncomp_ && c < 3; ++c) (*this)(node, c) = v[c];
    }

    // Symmetric-tensor access; absent components read as zero.
    Sym3 sym_at(std::size_t node) const;
    void set_sym(std::size_t node, const Sym3& s);

    std::span<const double> raw() const { return data_; }
    std::span<double> raw() { return data_; }

    void fill(double v);
    bool all_finite() const;

private:
    Grid grid_;
    FieldKind kind_;
    int ncomp_;
    std::vector<double> data_;
};

// Central finite-difference derivative along `axis` at the grid's configured
// order (2, 4 or 6) with periodic wraparound. Throws on axis >= dim.
Field partial_derivative(const Field& f, int axis);

// Second derivative along one axis (2nd-order stencil); used by the optional
// hyperdissipation term only.
Field laplacian(const Field& f);

// Tensor-product interpolation at an arbitrary point (reduced periodically).
// `out` must have f.ncomp() entries. Order 1 (linear) or 3 (cubic) per the
// grid's configuration.
void interpolate(const Field& f, const Vec3& x, std::span<double> out);
double interpolate_scalar(const Field& f, const Vec3& x);
Vec3 interpolate_vec(const Field& f, const Vec3& x);

// Volume-weighted sum with compensated (Kahan) accumulation in a fixed node
// order, so repeated runs are bit-identical.
double integrate(const Field& f);

double max_abs(const Field& f);
double max_abs_diff(const Field& a, const Field& b);
double l2_norm(const Field& f);

// Throws InvariantError naming the operation if any entry is NaN/Inf.
void require_finite(const Field& f, const std::string& what);

}  // namespace epadm
