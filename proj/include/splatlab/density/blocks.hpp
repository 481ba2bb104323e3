#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "splatlab/core/splat.hpp"
#include "splatlab/density/kdtree.hpp"
#include "splatlab/ingest/json.hpp"
#include "splatlab/stats/reports.hpp"

namespace splatlab::density {

// Per-point local density: rho_i = k / ((4/3) pi r_k^3) with r_k the
// distance to the k-th nearest other point. Coincident points clamp r_k
// at 1e-9 so the density stays finite.
std::vector<double> knn_density(const PointCloud& cloud, int k);

struct Aabb {
    Vec3 lo, hi;
    bool contains(const Vec3& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y &&
               p.z >= lo.z && p.z <= hi.z;
    }
    void merge(const Aabb& o) {
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], o.lo[a]);
            hi[a] = std::max(hi[a], o.hi[a]);
        }
    }
};

struct SpatialBlock {
    int id = 0;
    Aabb bounds;
    std::vector<int> point_indices;     // into the cloud
    std::vector<int> gaussian_indices;  // into the primitive list
    double rho = 0.0;                   // median member point density
    Vec3 centroid;                      // mean member point position
};

struct Partition {
    std::vector<SpatialBlock> blocks;
    int grid_resolution = 0;
    bool under_target = false;  // fewer occupied cells than requested at g=64
};

// Uniform grid over the cloud bounding box at the smallest resolution with
// at least `target_blocks` occupied cells, then smallest-count cells are
// merged into their nearest-centroid neighbor until exactly `target_blocks`
// remain. Every point belongs to exactly one block; every primitive is
// assigned to the block containing it (nearest centroid as fallback).
Partition partition_blocks(const PointCloud& cloud,
                           std::span<const GaussianPrimitive> primitives,
                           int target_blocks, int density_k = 32);

enum class Tercile { q1_dense = 0, q2_mid = 1, q3_sparse = 2 };

const char* to_string(Tercile t);

struct Stratification {
    std::vector<Tercile> tercile_of_block;  // indexed by block id
    std::array<int, 3> counts{0, 0, 0};
};

// Blocks sorted by rho descending (ties by id) and cut into three contiguous
// groups whose sizes differ by at most one; the remainder goes to the denser
// groups.
Stratification stratify_terciles(std::span<const SpatialBlock> blocks);

ingest::Json stratification_json(std::span<const SpatialBlock> blocks,
                                 const Stratification& strat);

struct TercileDistances {
    std::size_t n = 0;
    double median = 0.0;
    double p90 = 0.0;
};

struct CoverageReport {
    std::vector<double> distances;  // per primitive, nearest cloud point
    std::array<TercileDistances, 3> per_tercile;
    TercileDistances global;
    stats::Histogram histogram;

    ingest::Json to_json() const;
};

// Distance from every primitive to its nearest cloud point, summarized per
// density tercile.
CoverageReport coverage_divergence(const PointCloud& cloud,
                                   std::span<const GaussianPrimitive> primitives,
                                   std::span<const SpatialBlock> blocks,
                                   const Stratification& strat);

}  // namespace splatlab::density
