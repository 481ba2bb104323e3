#pragma once

#include <cstdint>
#include <vector>

#include "splatlab/core/quat.hpp"
#include "splatlab/core/symmat3.hpp"
#include "splatlab/core/vec3.hpp"

namespace splatlab {

// Degree-0 real spherical harmonic basis constant, 1 / (2 sqrt(pi)).
inline constexpr double kShC0 = 0.28209479177387814;

// One converged splat. Scales are kept in log space and opacity as the raw
// logit so file round-trips stay bit-exact; activations are applied only
// where a consumer needs them.
struct GaussianPrimitive {
    Vec3 position;
    Quat rotation;                // unit after load
    Vec3 log_scales;
    double opacity_logit = 0.0;
    Vec3 sh_dc;
    std::vector<float> sh_rest;   // empty or 45 higher-order SH coefficients

    bool finite() const {
        if (!position.finite() || !rotation.finite() || !log_scales.finite() ||
            !std::isfinite(opacity_logit) || !sh_dc.finite())
            return false;
        for (float c : sh_rest)
            if (!std::isfinite(c)) return false;
        return true;
    }

    bool valid() const {
        return finite() && (sh_rest.empty() || sh_rest.size() == 45) &&
               std::fabs(rotation.norm() - 1.0) <= 1e-6;
    }
};

struct PointCloud {
    std::vector<Vec3> positions;
    std::vector<Vec3> colors;        // empty, or one RGB in [0,1] per point
    std::vector<std::uint64_t> ids;  // empty, or one id per point

    std::size_t size() const { return positions.size(); }
    bool has_colors() const { return !colors.empty(); }
};

// Sigma = R diag(exp(2 log_scales)) R^T. Throws std::invalid_argument on an
// invalid primitive.
SymMat3 covariance_of(const GaussianPrimitive& p);

// Raw DC radiance per channel: 0.5 + C0 * sh_dc. Deliberately unclamped.
Vec3 radiance_dc(const Vec3& sh_dc);

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace splatlab
