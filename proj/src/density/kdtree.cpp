#include "splatlab/density/kdtree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace splatlab::density {

namespace {

constexpr int kLeafSize = 16;

// Heap ordering: the root is the worst kept neighbor. Ties in distance are
// resolved by index so the kept set matches a brute-force (dist2, index) sort.
bool worse(const Neighbor& a, const Neighbor& b) {
    return a.dist2 != b.dist2 ? a.dist2 < b.dist2 : a.index < b.index;
}

}  // namespace

KdTree::KdTree(std::span<const Vec3> points)
    : points_(points.begin(), points.end()) {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0);
    if (!points_.empty()) root_ = build(0, int(points_.size()));
}

int KdTree::build(int begin, int end) {
    Node node;
    if (end - begin <= kLeafSize) {
        node.begin = begin;
        node.end = end;
        nodes_.push_back(node);
        return int(nodes_.size()) - 1;
    }
    // Split the widest axis at the median.
    Vec3 lo = points_[order_[begin]], hi = lo;
    for (int i = begin + 1; i < end; ++i) {
        const Vec3& p = points_[order_[i]];
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    }
    int axis = 0;
    double extent = hi[0] - lo[0];
    for (int a = 1; a < 3; ++a)
        if (hi[a] - lo[a] > extent) {
            extent = hi[a] - lo[a];
            axis = a;
        }
    if (extent == 0.0) {  // all coincident: leaf regardless of size
        node.begin = begin;
        node.end = end;
        nodes_.push_back(node);
        return int(nodes_.size()) - 1;
    }
    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid,
                     order_.begin() + end, [&](int a, int b) {
                         const double va = points_[a][axis], vb = points_[b][axis];
                         return va != vb ? va < vb : a < b;
                     });
    node.axis = axis;
    node.split = points_[order_[mid]][axis];
    const int self = int(nodes_.size());
    nodes_.push_back(node);
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
}

void KdTree::search(int ni, const Vec3& q, int k, double min_dist2,
                    std::vector<Neighbor>& heap) const {
    const Node& node = nodes_[ni];
    if (node.axis < 0) {
        for (int i = node.begin; i < node.end; ++i) {
            const int idx = order_[i];
            const double d2 = dist2(q, points_[idx]);
            if (d2 <= min_dist2) continue;
            const Neighbor cand{d2, idx};
            if (int(heap.size()) < k) {
                heap.push_back(cand);
                std::push_heap(heap.begin(), heap.end(), worse);
            } else if (worse(cand, heap.front())) {
                std::pop_heap(heap.begin(), heap.end(), worse);
                heap.back() = cand;
                std::push_heap(heap.begin(), heap.end(), worse);
            }
        }
        return;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    search(near, q, k, min_dist2, heap);
    // Strict comparison: equal-distance candidates on the far side must be
    // visited so index tie-breaking matches brute force.
    if (int(heap.size()) < k || delta * delta <= heap.front().dist2)
        search(far, q, k, min_dist2, heap);
}

std::vector<Neighbor> KdTree::knn(const Vec3& query, int k,
                                  double min_dist2) const {
    if (k < 1) throw std::invalid_argument("KdTree::knn: k must be >= 1");
    std::vector<Neighbor> heap;
    heap.reserve(k);
    if (root_ >= 0) search(root_, query, k, min_dist2, heap);
    std::sort(heap.begin(), heap.end(), worse);
    return heap;
}

Neighbor KdTree::nearest(const Vec3& query) const {
    auto r = knn(query, 1);
    return r.empty() ? Neighbor{} : r[0];
}

void KdTree::count(int ni, const Vec3& q, double r2, std::size_t& acc) const {
    const Node& node = nodes_[ni];
    if (node.axis < 0) {
        for (int i = node.begin; i < node.end; ++i)
            if (dist2(q, points_[order_[i]]) <= r2) ++acc;
        return;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    count(near, q, r2, acc);
    if (delta * delta <= r2) count(far, q, r2, acc);
}

std::size_t KdTree::count_within(const Vec3& query, double r2) const {
    std::size_t acc = 0;
    if (root_ >= 0) count(root_, query, r2, acc);
    return acc;
}

}  // namespace splatlab::density
