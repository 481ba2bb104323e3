#pragma once

#include <array>
#include <optional>

#include "splatlab/core/mat3.hpp"
#include "splatlab/core/vec3.hpp"

namespace splatlab {

// Symmetric 3x3 matrix stored as its six unique entries.
struct SymMat3 {
    double xx = 0.0, xy = 0.0, xz = 0.0, yy = 0.0, yz = 0.0, zz = 0.0;

    constexpr SymMat3() = default;
    constexpr SymMat3(double xx_, double xy_, double xz_, double yy_,
                      double yz_, double zz_)
        : xx(xx_), xy(xy_), xz(xz_), yy(yy_), yz(yz_), zz(zz_) {}

    static SymMat3 identity() { return {1, 0, 0, 1, 0, 1}; }
    static SymMat3 diag(const Vec3& d) { return {d.x, 0, 0, d.y, 0, d.z}; }

    // Symmetric part of a general matrix (entries averaged across the diagonal).
    static SymMat3 from_mat3(const Mat3& a) {
        return {a[0][0],
                0.5 * (a[0][1] + a[1][0]),
                0.5 * (a[0][2] + a[2][0]),
                a[1][1],
                0.5 * (a[1][2] + a[2][1]),
                a[2][2]};
    }

    static SymMat3 outer(const Vec3& v) {
        return {v.x * v.x, v.x * v.y, v.x * v.z, v.y * v.y, v.y * v.z, v.z * v.z};
    }

    Mat3 to_mat3() const {
        Mat3 a;
        a[0][0] = xx; a[0][1] = xy; a[0][2] = xz;
        a[1][0] = xy; a[1][1] = yy; a[1][2] = yz;
        a[2][0] = xz; a[2][1] = yz; a[2][2] = zz;
        return a;
    }

    SymMat3 operator+(const SymMat3& o) const {
        return {xx + o.xx, xy + o.xy, xz + o.xz, yy + o.yy, yz + o.yz, zz + o.zz};
    }
    SymMat3 operator-(const SymMat3& o) const {
        return {xx - o.xx, xy - o.xy, xz - o.xz, yy - o.yy, yz - o.yz, zz - o.zz};
    }
    SymMat3 operator*(double s) const {
        return {xx * s, xy * s, xz * s, yy * s, yz * s, zz * s};
    }

    Vec3 operator*(const Vec3& v) const {
        return {xx * v.x + xy * v.y + xz * v.z,
                xy * v.x + yy * v.y + yz * v.z,
                xz * v.x + yz * v.y + zz * v.z};
    }

    double trace() const { return xx + yy + zz; }

    double det() const {
        return xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) +
               xz * (xy * yz - yy * xz);
    }

    // Frobenius inner product / norm over all nine matrix entries.
    double frob_dot(const SymMat3& o) const {
        return xx * o.xx + yy * o.yy + zz * o.zz +
               2.0 * (xy * o.xy + xz * o.xz + yz * o.yz);
    }
    double frob_norm2() const { return frob_dot(*this); }
    double frob_norm() const;

    bool finite() const;

    // Lower-triangular Cholesky factor; nullopt if not positive definite.
    std::optional<Mat3> cholesky() const;
    bool is_spd() const { return cholesky().has_value(); }

    // Inverse assuming SPD (via adjugate; caller guarantees det > 0).
    SymMat3 inverse_spd() const;
};

inline SymMat3 operator*(double s, const SymMat3& m) { return m * s; }

struct EigenSym3 {
    std::array<double, 3> values;  // descending
    Mat3 vectors;                  // columns correspond to values
};

// Eigenvalues sorted descending. Closed-form trigonometric solution with a
// cyclic-Jacobi fallback when the characteristic cubic is near-degenerate.
// Throws std::invalid_argument on non-finite input.
std::array<double, 3> eigvals_sym3(const SymMat3& m);

// Full eigendecomposition (values descending, orthonormal column vectors)
// via cyclic Jacobi iteration.
EigenSym3 eig_sym3(const SymMat3& m);

}  // namespace splatlab
