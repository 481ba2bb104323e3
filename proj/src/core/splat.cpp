#include "splatlab/core/splat.hpp"

#include <stdexcept>

namespace splatlab {

SymMat3 covariance_of(const GaussianPrimitive& p) {
    if (!p.valid())
        throw std::invalid_argument("covariance_of: invalid primitive");
    const Mat3 r = p.rotation.to_matrix();
    const Vec3 d{std::exp(2.0 * p.log_scales.x), std::exp(2.0 * p.log_scales.y),
                 std::exp(2.0 * p.log_scales.z)};
    // R D R^T, accumulated column-wise: sum_k d_k r_k r_k^T.
    SymMat3 sigma;
    for (int k = 0; k < 3; ++k)
        sigma = sigma + SymMat3::outer(r.col(k)) * d[k];
    return sigma;
}

Vec3 radiance_dc(const Vec3& sh_dc) {
    if (!sh_dc.finite())
        throw std::invalid_argument("radiance_dc: non-finite sh_dc");
    return {0.5 + kShC0 * sh_dc.x, 0.5 + kShC0 * sh_dc.y, 0.5 + kShC0 * sh_dc.z};
}

}  // namespace splatlab
