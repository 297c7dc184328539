#include "epadm/grid.hpp"

#include <algorithm>
#include <cmath>

#include "epadm/errors.hpp"

namespace epadm {

std::array<double, 4> solve4(std::array<std::array<double, 4>, 4> a,
                             std::array<double, 4> rhs) {
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (a[pivot][col] == 0.0) {
            throw InvariantError("solve4: singular basis system");
        }
        std::swap(a[col], a[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (int r = col + 1; r < 4; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::array<double, 4> x{};
    for (int r = 3; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c < 4; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

Grid Grid::make(int dim, std::array<int, 3> points,
                std::array<double, 3> extent, int fd_order,
                int interp_order) {
    if (dim < 1 || dim > 3) throw ConfigError("grid dim must be 1, 2 or 3");
    if (fd_order != 2 && fd_order != 4 && fd_order != 6) {
        throw ConfigError("fd_order must be 2, 4 or 6");
    }
    if (interp_order != 1 && interp_order != 3) {
        throw ConfigError("interp_order must be 1 or 3");
    }
    Grid g;
    g.dim_ = dim;
    g.fd_order_ = fd_order;
    g.interp_order_ = interp_order;
    g.num_nodes_ = 1;
    g.cell_volume_ = 1.0;
    for (int a = 0; a < 3; ++a) {
        if (a < dim) {
            if (points[a] < fd_order + 1) {
                throw ConfigError("grid points per axis too small for stencil");
            }
            if (!(extent[a] > 0.0)) {
                throw ConfigError("grid extent must be positive");
            }
            g.points_[a] = points[a];
            g.extent_[a] = extent[a];
        } else {
            g.points_[a] = 1;
            g.extent_[a] = 1.0;
        }
        g.spacing_[a] = g.extent_[a] / g.points_[a];
        g.num_nodes_ *= g.points_[a];
        if (a < dim) g.cell_volume_ *= g.spacing_[a];
    }
    return g;
}

double Grid::min_spacing() const {
    double h = spacing_[0];
    for (int a = 1; a < dim_; ++a) h = std::min(h, spacing_[a]);
    return h;
}

double Grid::wrap_coord(double x, int axis) const {
    const double L = extent_[axis];
    double r = std::fmod(x, L);
    if (r < 0.0) r += L;
    if (r >= L) r = 0.0;  // fmod can land exactly on L after the add
    return r;
}

Vec3 Grid::wrap_point(const Vec3& x) const {
    Vec3 r = x;
    for (int a = 0; a < dim_; ++a) r[a] = wrap_coord(x[a], a);
    for (int a = dim_; a < 3; ++a) r[a] = 0.0;
    return r;
}

int components_for(FieldKind kind, int dim) {
    switch (kind) {
        case FieldKind::Scalar:
        case FieldKind::ScalarDensity:
            return 1;
        case FieldKind::Vector:
        case FieldKind::OneForm:
        case FieldKind::OneFormDensity:
            return dim;
        case FieldKind::SymTensor:
            return dim * (dim + 1) / 2;
    }
    return 1;
}

std::string field_kind_name(FieldKind kind) {
    switch (kind) {
        case FieldKind::Scalar: return "scalar";
        case FieldKind::ScalarDensity: return "scalar_density";
        case FieldKind::Vector: return "vector";
        case FieldKind::OneForm: return "oneform";
        case FieldKind::OneFormDensity: return "oneform_density";
        case FieldKind::SymTensor: return "sym_tensor";
    }
    return "unknown";
}

Field::Field(const Grid& grid, FieldKind kind)
    : grid_(grid),
      kind_(kind),
      ncomp_(components_for(kind, grid.dim())),
      data_(grid.num_nodes() * static_cast<std::size_t>(ncomp_), 0.0) {}

Sym3 Field::sym_at(std::size_t node) const {
    Sym3 s;
    s.s.fill(0.0);
    const int d = grid_.dim();
    int c = 0;
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) s.set(a, b, (*this)(node, c++));
    return s;
}

void Field::set_sym(std::size_t node, const Sym3& s) {
    const int d = grid_.dim();
    int c = 0;
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) (*this)(node, c++) = s(a, b);
}

void Field::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Field::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void require_finite(const Field& f, const std::string& what) {
    if (!f.all_finite()) {
        throw InvariantError(what + ": non-finite field value");
    }
}

namespace {

// Antisymmetric pair differences keep derivatives of constants exactly zero.
struct Stencil {
    int half;
    std::array<double, 3> w;  // weight of f[i+k] - f[i-k], k = 1..half
};

Stencil stencil_for(int order, double h) {
    switch (order) {
        case 2:
            return {1, {1.0 / (2.0 * h), 0.0, 0.0}};
        case 4:
            return {2, {8.0 / (12.0 * h), -1.0 / (12.0 * h), 0.0}};
        default:
            return {3,
                    {45.0 / (60.0 * h), -9.0 / (60.0 * h), 1.0 / (60.0 * h)}};
    }
}

}  // namespace

Field partial_derivative(const Field& f, int axis) {
    const Grid& g = f.grid();
    if (axis < 0 || axis >= g.dim()) {
        throw ConfigError("partial_derivative: axis out of range");
    }
    Field out(g, f.kind());
    const Stencil st = stencil_for(g.fd_order(), g.spacing(axis));
    const int n = g.points(axis);
    const int nc = f.ncomp();

    const int n0 = g.points(0), n1 = g.points(1), n2 = g.points(2);
    for (int i0 = 0; i0 < n0; ++i0) {
        for (int i1 = 0; i1 < n1; ++i1) {
            for (int i2 = 0; i2 < n2; ++i2) {
                std::array<int, 3> c{i0, i1, i2};
                const std::size_t node = g.flat(i0, i1, i2);
                for (int k = 1; k <= st.half; ++k) {
                    std::array<int, 3> cp = c, cm = c;
                    cp[axis] = (c[axis] + k) % n;
                    cm[axis] = (c[axis] - k + n) % n;
                    const std::size_t np = g.flat(cp[0], cp[1], cp[2]);
                    const std::size_t nm = g.flat(cm[0], cm[1], cm[2]);
                    for (int cc = 0; cc < nc; ++cc) {
                        out(node, cc) +=
                            st.w[k - 1] * (f(np, cc) - f(nm, cc));
                    }
                }
            }
        }
    }
    return out;
}

Field laplacian(const Field& f) {
    const Grid& g = f.grid();
    Field out(g, f.kind());
    const int nc = f.ncomp();
    const int n0 = g.points(0), n1 = g.points(1), n2 = g.points(2);
    for (int axis = 0; axis < g.dim(); ++axis) {
        const double inv_h2 = 1.0 / (g.spacing(axis) * g.spacing(axis));
        const int n = g.points(axis);
        for (int i0 = 0; i0 < n0; ++i0) {
            for (int i1 = 0; i1 < n1; ++i1) {
                for (int i2 = 0; i2 < n2; ++i2) {
                    std::array<int, 3> c{i0, i1, i2};
                    const std::size_t node = g.flat(i0, i1, i2);
                    std::array<int, 3> cp = c, cm = c;
                    cp[axis] = (c[axis] + 1) % n;
                    cm[axis] = (c[axis] - 1 + n) % n;
                    const std::size_t np = g.flat(cp[0], cp[1], cp[2]);
                    const std::size_t nm = g.flat(cm[0], cm[1], cm[2]);
                    for (int cc = 0; cc < nc; ++cc) {
                        out(node, cc) += inv_h2 * (f(np, cc) - 2.0 * f(node, cc) +
                                                   f(nm, cc));
                    }
                }
            }
        }
    }
    return out;
}

namespace {

// Lagrange weights on nodes {-1, 0, 1, 2} at parameter t in [0, 1).
inline void cubic_weights(double t, double w[4]) {
    w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    w[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
    w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
}

}  // namespace

void interpolate(const Field& f, const Vec3& x, std::span<double> out) {
    const Grid& g = f.grid();
    const int d = g.dim();
    const int nc = f.ncomp();
    const int order = g.interp_order();
    const int npts = (order == 1) ? 2 : 4;
    const int base_off = (order == 1) ? 0 : -1;

    int idx[3][4];
    double w[3][4];
    for (int a = 0; a < d; ++a) {
        const double u = g.wrap_coord(x[a], a) / g.spacing(a);
        int i0 = static_cast<int>(std::floor(u));
        double t = u - i0;
        if (i0 >= g.points(a)) {  // guard against u == npts from rounding
            i0 = g.points(a) - 1;
            t = 1.0;
        }
        if (order == 1) {
            w[a][0] = 1.0 - t;
            w[a][1] = t;
        } else {
            cubic_weights(t, w[a]);
        }
        for (int k = 0; k < npts; ++k) {
            int i = (i0 + base_off + k) % g.points(a);
            if (i < 0) i += g.points(a);
            idx[a][k] = i;
        }
    }
    // Unused axes collapse to the single node 0 with weight 1.
    for (int a = d; a < 3; ++a) {
        idx[a][0] = 0;
        w[a][0] = 1.0;
    }
    const int k0max = (d >= 1) ? npts : 1;
    const int k1max = (d >= 2) ? npts : 1;
    const int k2max = (d >= 3) ? npts : 1;

    for (int c = 0; c < nc; ++c) out[c] = 0.0;
    for (int k0 = 0; k0 < k0max; ++k0) {
        for (int k1 = 0; k1 < k1max; ++k1) {
            for (int k2 = 0; k2 < k2max; ++k2) {
                const double ww = w[0][k0] * w[1][k1] * w[2][k2];
                const std::size_t node =
                    g.flat(idx[0][k0], idx[1][k1], idx[2][k2]);
                for (int c = 0; c < nc; ++c) out[c] += ww * f(node, c);
            }
        }
    }
}

double interpolate_scalar(const Field& f, const Vec3& x) {
    double v;
    interpolate(f, x, std::span<double>(&v, 1));
    return v;
}

Vec3 interpolate_vec(const Field& f, const Vec3& x) {
    std::array<double, 3> buf{0.0, 0.0, 0.0};
    interpolate(f, x, std::span<double>(buf.data(), f.ncomp()));
    return buf;
}

double integrate(const Field& f) {
    // Fixed-order Kahan sum; periodic trapezoid equals the plain node sum.
    double sum = 0.0, comp = 0.0;
    for (std::size_t n = 0; n < f.num_nodes(); ++n) {
        const double y = f(n, 0) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum * f.grid().cell_volume();
}

double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f.raw()) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    const auto ra = a.raw();
    const auto rb = b.raw();
    for (std::size_t i = 0; i < ra.size(); ++i) {
        m = std::max(m, std::abs(ra[i] - rb[i]));
    }
    return m;
}

double l2_norm(const Field& f) {
    double sum = 0.0, comp = 0.0;
    for (double v : f.raw()) {
        const double y = v * v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return std::sqrt(sum * f.grid().cell_volume());
}

}  // namespace epadm
