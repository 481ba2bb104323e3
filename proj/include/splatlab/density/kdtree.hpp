#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "splatlab/core/vec3.hpp"

namespace splatlab::density {

struct Neighbor {
    double dist2 = 0.0;
    int index = -1;
};

// Exact k-nearest-neighbor index over a fixed point set. Results are
// identical to a brute-force scan: neighbors are ordered by (dist2, index)
// and pruning is strict, so equal-distance candidates are never dropped.
class KdTree {
public:
    explicit KdTree(std::span<const Vec3> points);

    std::size_t size() const { return points_.size(); }

    // k nearest neighbors of `query`, ascending (dist2, index). Neighbors at
    // squared distance <= min_dist2 are excluded (pass a negative value to
    // keep everything, 0.0 to drop exact hits such as the query point itself).
    std::vector<Neighbor> knn(const Vec3& query, int k,
                              double min_dist2 = -1.0) const;

    Neighbor nearest(const Vec3& query) const;

    // Number of points with squared distance <= r2.
    std::size_t count_within(const Vec3& query, double r2) const;

private:
    struct Node {
        int axis = -1;       // -1 for leaf
        double split = 0.0;
        int left = -1, right = -1;
        int begin = 0, end = 0;  // leaf range into order_
    };

    int build(int begin, int end);
    void search(int node, const Vec3& q, int k, double min_dist2,
                std::vector<Neighbor>& heap) const;
    void count(int node, const Vec3& q, double r2, std::size_t& acc) const;

    std::vector<Vec3> points_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace splatlab::density
