#include "splatlab/core/symmat3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splatlab {

double SymMat3::frob_norm() const { return std::sqrt(frob_norm2()); }

bool SymMat3::finite() const {
    return std::isfinite(xx) && std::isfinite(xy) && std::isfinite(xz) &&
           std::isfinite(yy) && std::isfinite(yz) && std::isfinite(zz);
}

std::optional<Mat3> SymMat3::cholesky() const {
    if (!finite()) return std::nullopt;
    Mat3 l;
    if (xx <= 0.0) return std::nullopt;
    l[0][0] = std::sqrt(xx);
    l[1][0] = xy / l[0][0];
    l[2][0] = xz / l[0][0];
    const double d1 = yy - l[1][0] * l[1][0];
    if (d1 <= 0.0) return std::nullopt;
    l[1][1] = std::sqrt(d1);
    l[2][1] = (yz - l[2][0] * l[1][0]) / l[1][1];
    const double d2 = zz - l[2][0] * l[2][0] - l[2][1] * l[2][1];
    if (d2 <= 0.0) return std::nullopt;
    l[2][2] = std::sqrt(d2);
    return l;
}

SymMat3 SymMat3::inverse_spd() const {
    const double d = det();
    const double c00 = yy * zz - yz * yz;
    const double c01 = xz * yz - xy * zz;
    const double c02 = xy * yz - xz * yy;
    const double c11 = xx * zz - xz * xz;
    const double c12 = xy * xz - xx * yz;
    const double c22 = xx * yy - xy * xy;
    return SymMat3{c00, c01, c02, c11, c12, c22} * (1.0 / d);
}

namespace {

// Cyclic Jacobi on the symmetric 3x3; returns values (unsorted) and the
// accumulated rotation whose columns are the eigenvectors.
void jacobi_sym3(const SymMat3& m, double w[3], Mat3& v) {
    double a[3][3] = {{m.xx, m.xy, m.xz}, {m.xy, m.yy, m.yz}, {m.xz, m.yz, m.zz}};
    v = Mat3::identity();
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if (off < 1e-60) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double apq = a[p][q];
                const double app = a[p][p], aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for (int k = 0; k < 3; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[p][k] = a[k][p];
                    a[k][q] = s * akp + c * akq;
                    a[q][k] = a[k][q];
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    w[0] = a[0][0];
    w[1] = a[1][1];
    w[2] = a[2][2];
}

std::array<double, 3> sorted_desc(double a, double b, double c) {
    std::array<double, 3> r = {a, b, c};
    std::sort(r.begin(), r.end(), std::greater<double>());
    return r;
}

}  // namespace

std::array<double, 3> eigvals_sym3(const SymMat3& m) {
    if (!m.finite())
        throw std::invalid_argument("eigvals_sym3: non-finite matrix entry");

    const double p1 = m.xy * m.xy + m.xz * m.xz + m.yz * m.yz;
    if (p1 == 0.0) return sorted_desc(m.xx, m.yy, m.zz);

    const double q = m.trace() / 3.0;
    const double p2 = (m.xx - q) * (m.xx - q) + (m.yy - q) * (m.yy - q) +
                      (m.zz - q) * (m.zz - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    if (p == 0.0) return {q, q, q};

    // B = (A - qI) / p; r = det(B) / 2 lies in [-1, 1] for symmetric input.
    const SymMat3 b{(m.xx - q) / p, m.xy / p,       m.xz / p,
                    (m.yy - q) / p, m.yz / p,       (m.zz - q) / p};
    double r = b.det() / 2.0;
    r = std::clamp(r, -1.0, 1.0);

    // Repeated roots put r on a branch cut of acos; hand those off to Jacobi.
    if (1.0 - r * r < 1e-12) {
        double w[3];
        Mat3 v;
        jacobi_sym3(m, w, v);
        return sorted_desc(w[0], w[1], w[2]);
    }

    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    return sorted_desc(e1, e2, e3);
}

EigenSym3 eig_sym3(const SymMat3& m) {
    if (!m.finite())
        throw std::invalid_argument("eig_sym3: non-finite matrix entry");
    double w[3];
    Mat3 v;
    jacobi_sym3(m, w, v);
    int order[3] = {0, 1, 2};
    std::sort(order, order + 3, [&](int i, int j) { return w[i] > w[j]; });
    EigenSym3 r;
    for (int j = 0; j < 3; ++j) {
        r.values[j] = w[order[j]];
        for (int i = 0; i < 3; ++i) r.vectors[i][j] = v[i][order[j]];
    }
    return r;
}

}  // namespace splatlab
