#pragma once

#include <array>
#include <cstdint>

#include "splatlab/core/splat.hpp"
#include "splatlab/density/kdtree.hpp"

namespace splatlab::probe {

inline constexpr int kFeatureDim = 16;
using FeatureVec = std::array<double, kFeatureDim>;

// Feature layout:
//   [0]      neighbor count within the global median k-NN radius
//   [1..4]   mean / std / min / max neighbor distance
//   [5..7]   local PCA eigenvalues of neighbor positions, descending
//   [8..10]  neighbor color mean (0.5 sentinel without colors)
//   [11..13] neighbor color std (0 without colors)
//   [14]     log local density from the k-th neighbor radius
//   [15]     no-color flag
//
// Neighborhoods are the k nearest cloud points to the query center; a cloud
// point coincident with the center is not its own neighbor.
class FeatureExtractor {
public:
    FeatureExtractor(const PointCloud& cloud, int k);

    FeatureVec extract(const Vec3& center) const;

    double median_knn_radius() const { return median_radius_; }
    int k() const { return k_; }

private:
    const PointCloud& cloud_;
    density::KdTree tree_;
    int k_;
    double median_radius_ = 0.0;
};

}  // namespace splatlab::probe
