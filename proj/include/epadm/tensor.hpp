#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

// Small fixed-size algebra used pointwise throughout: 3-vectors, symmetric
// 3x3 matrices (6 stored components), general 3x3 matrices, and a pivoted
// 4x4 solve. Grids of dimension D < 3 pad unused vector components with 0;
// metric closures always supply full 3x3 data, so the padded algebra agrees
// with the D-dimensional one.

namespace epadm {

using Vec3 = std::array<double, 3>;

inline Vec3 vzero() { return {0.0, 0.0, 0.0}; }

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec3 operator*(double s, const Vec3& a) {
    return {s * a[0], s * a[1], s * a[2]};
}

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Symmetric 3x3 matrix, components ordered xx, xy, xz, yy, yz, zz.
struct Sym3 {
    std::array<double, 6> s{};

    static constexpr int index(int a, int b) {
        if (a > b) std::swap(a, b);
        constexpr int row_start[3] = {0, 3, 5};
        return row_start[a] + (b - a);
    }

    double operator()(int a, int b) const { return s[index(a, b)]; }
    void set(int a, int b, double v) { s[index(a, b)] = v; }

    static Sym3 identity() {
        Sym3 m;
        m.s = {1.0, 0.0, 0.0, 1.0, 0.0, 1.0};
        return m;
    }

    static Sym3 diag(double a, double b, double c) {
        Sym3 m;
        m.s = {a, 0.0, 0.0, b, 0.0, c};
        return m;
    }
};

inline double sym_det(const Sym3& g) {
    const double xx = g.s[0], xy = g.s[1], xz = g.s[2];
    const double yy = g.s[3], yz = g.s[4], zz = g.s[5];
    return xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) +
           xz * (xy * yz - yy * xz);
}

// Positive definiteness via leading principal minors.
inline bool sym_positive_definite(const Sym3& g) {
    const double m1 = g.s[0];
    const double m2 = g.s[0] * g.s[3] - g.s[1] * g.s[1];
    const double m3 = sym_det(g);
    return m1 > 0.0 && m2 > 0.0 && m3 > 0.0;
}

inline Sym3 sym_inverse(const Sym3& g) {
    const double det = sym_det(g);
    if (!(det > 0.0)) {
        throw std::domain_error("sym_inverse: matrix not positive definite");
    }
    const double xx = g.s[0], xy = g.s[1], xz = g.s[2];
    const double yy = g.s[3], yz = g.s[4], zz = g.s[5];
    Sym3 inv;
    inv.s[0] = (yy * zz - yz * yz) / det;
    inv.s[1] = (xz * yz - xy * zz) / det;
    inv.s[2] = (xy * yz - xz * yy) / det;
    inv.s[3] = (xx * zz - xz * xz) / det;
    inv.s[4] = (xy * xz - xx * yz) / det;
    inv.s[5] = (xx * yy - xy * xy) / det;
    return inv;
}

inline Vec3 sym_matvec(const Sym3& g, const Vec3& v) {
    return {g(0, 0) * v[0] + g(0, 1) * v[1] + g(0, 2) * v[2],
            g(1, 0) * v[0] + g(1, 1) * v[1] + g(1, 2) * v[2],
            g(2, 0) * v[0] + g(2, 1) * v[1] + g(2, 2) * v[2]};
}

// v^a g_ab w^b
inline double sym_quad(const Sym3& g, const Vec3& v, const Vec3& w) {
    return dot(v, sym_matvec(g, w));
}

// General 3x3 matrix, row-major: m[r][c].
struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    static Mat3 identity() {
        Mat3 a;
        a.m = {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
        return a;
    }

    double operator()(int r, int c) const { return m[r][c]; }
    double& operator()(int r, int c) { return m[r][c]; }
};

inline Vec3 matvec(const Mat3& a, const Vec3& v) {
    return {a(0, 0) * v[0] + a(0, 1) * v[1] + a(0, 2) * v[2],
            a(1, 0) * v[0] + a(1, 1) * v[1] + a(1, 2) * v[2],
            a(2, 0) * v[0] + a(2, 1) * v[1] + a(2, 2) * v[2]};
}

// a^T v (contract on the row index).
inline Vec3 matvec_transpose(const Mat3& a, const Vec3& v) {
    return {a(0, 0) * v[0] + a(1, 0) * v[1] + a(2, 0) * v[2],
            a(0, 1) * v[0] + a(1, 1) * v[1] + a(2, 1) * v[2],
            a(0, 2) * v[0] + a(1, 2) * v[1] + a(2, 2) * v[2]};
}

inline double mat_det(const Mat3& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

inline Mat3 mat_inverse(const Mat3& a) {
    const double det = mat_det(a);
    if (det == 0.0 || !std::isfinite(det)) {
        throw std::domain_error("mat_inverse: singular matrix");
    }
    Mat3 inv;
    inv(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) / det;
    inv(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) / det;
    inv(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) / det;
    inv(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) / det;
    inv(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) / det;
    inv(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) / det;
    inv(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) / det;
    inv(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) / det;
    inv(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / det;
    return inv;
}

inline Mat3 mat_mul(const Mat3& a, const Mat3& b) {
    Mat3 c;
    for (int r = 0; r < 3; ++r)
        for (int col = 0; col < 3; ++col) {
            c(r, col) = a(r, 0) * b(0, col) + a(r, 1) * b(1, col) +
                        a(r, 2) * b(2, col);
        }
    return c;
}

// Solve a 4x4 linear system in place with partial pivoting.
// Throws on a (numerically) singular matrix.
std::array<double, 4> solve4(std::array<std::array<double, 4>, 4> a,
                             std::array<double, 4> rhs);

inline double det4(const std::array<std::array<double, 4>, 4>& a) {
    double det = 0.0;
    for (int c = 0; c < 4; ++c) {
        std::array<std::array<double, 3>, 3> minor{};
        for (int r = 1; r < 4; ++r) {
            int mc = 0;
            for (int cc = 0; cc < 4; ++cc) {
                if (cc == c) continue;
                minor[r - 1][mc++] = a[r][cc];
            }
        }
        const double m =
            minor[0][0] * (minor[1][1] * minor[2][2] - minor[1][2] * minor[2][1]) -
            minor[0][1] * (minor[1][0] * minor[2][2] - minor[1][2] * minor[2][0]) +
            minor[0][2] * (minor[1][0] * minor[2][1] - minor[1][1] * minor[2][0]);
        det += ((c % 2 == 0) ? 1.0 : -1.0) * a[0][c] * m;
    }
    return det;
}

}  // namespace epadm
