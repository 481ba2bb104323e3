#include "splatlab/density/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace splatlab::density {

namespace {

constexpr double kFourThirdsPi = 4.0 / 3.0 * M_PI;
constexpr double kMinRadius = 1e-9;
constexpr int kMaxGridResolution = 64;

double density_from_radius(int k, double r) {
    r = std::max(r, kMinRadius);
    return double(k) / (kFourThirdsPi * r * r * r);
}

}  // namespace

std::vector<double> knn_density(const PointCloud& cloud, int k) {
    if (k < 1) throw std::invalid_argument("knn_density: k must be >= 1");
    if (cloud.size() <= std::size_t(k))
        throw std::invalid_argument("knn_density: cloud must have more than k points");
    const KdTree tree(cloud.positions);
    std::vector<double> rho(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        auto nb = tree.knn(cloud.positions[i], k + 1);
        // Drop this point's own entry; any other zero-distance entry is a
        // genuine duplicate neighbor and stays.
        for (std::size_t j = 0; j < nb.size(); ++j) {
            if (nb[j].index == int(i)) {
                nb.erase(nb.begin() + j);
                break;
            }
        }
        if (nb.size() > std::size_t(k)) nb.resize(k);
        rho[i] = density_from_radius(k, std::sqrt(nb.back().dist2));
    }
    return rho;
}

namespace {

struct Cell {
    std::uint64_t key = 0;  // linear grid index; survives merges
    std::vector<int> points;
    Aabb bounds;
    Vec3 centroid;

    void recompute_centroid(const PointCloud& cloud) {
        Vec3 c;
        for (int i : points) c += cloud.positions[i];
        centroid = c / double(points.size());
    }
};

}  // namespace

Partition partition_blocks(const PointCloud& cloud,
                           std::span<const GaussianPrimitive> primitives,
                           int target_blocks, int density_k) {
    if (cloud.size() == 0)
        throw std::invalid_argument("partition_blocks: empty cloud");
    if (target_blocks < 3)
        throw std::invalid_argument("partition_blocks: target_blocks must be >= 3");

    // Bounding box; zero-extent axes are padded by 1e-6 of the largest extent.
    Vec3 lo = cloud.positions[0], hi = lo;
    for (const Vec3& p : cloud.positions)
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    double max_extent = 0.0;
    for (int a = 0; a < 3; ++a) max_extent = std::max(max_extent, hi[a] - lo[a]);
    const double pad = max_extent > 0.0 ? 1e-6 * max_extent : 1e-6;
    for (int a = 0; a < 3; ++a)
        if (hi[a] - lo[a] == 0.0) {
            lo[a] -= 0.5 * pad;
            hi[a] += 0.5 * pad;
        }

    Partition out;
    std::map<std::uint64_t, Cell> cells;
    for (int g = 1; g <= kMaxGridResolution; ++g) {
        cells.clear();
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            std::uint64_t key = 0;
            for (int a = 0; a < 3; ++a) {
                const double t = (cloud.positions[i][a] - lo[a]) / (hi[a] - lo[a]);
                const int c = std::min(g - 1, int(t * g));
                key = key * std::uint64_t(g) + std::uint64_t(c);
            }
            cells[key].points.push_back(int(i));
        }
        out.grid_resolution = g;
        if (int(cells.size()) >= target_blocks) break;
        if (g == kMaxGridResolution) out.under_target = true;
    }

    // Cell bounds from grid coordinates, centroids from members.
    const int g = out.grid_resolution;
    for (auto& [key, cell] : cells) {
        cell.key = key;
        std::uint64_t k = key;
        int coord[3];
        coord[2] = int(k % g); k /= g;
        coord[1] = int(k % g); k /= g;
        coord[0] = int(k);
        for (int a = 0; a < 3; ++a) {
            const double w = (hi[a] - lo[a]) / g;
            cell.bounds.lo[a] = lo[a] + coord[a] * w;
            cell.bounds.hi[a] = lo[a] + (coord[a] + 1) * w;
        }
        cell.recompute_centroid(cloud);
    }

    // Merge smallest cells into their nearest-centroid neighbor until the
    // target count remains.
    std::vector<Cell> live;
    live.reserve(cells.size());
    for (auto& [key, cell] : cells) live.push_back(std::move(cell));
    while (int(live.size()) > target_blocks) {
        std::size_t victim = 0;
        for (std::size_t i = 1; i < live.size(); ++i)
            if (live[i].points.size() < live[victim].points.size() ||
                (live[i].points.size() == live[victim].points.size() &&
                 live[i].key < live[victim].key))
                victim = i;
        std::size_t host = victim == 0 ? 1 : 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < live.size(); ++i) {
            if (i == victim) continue;
            const double d = dist2(live[i].centroid, live[victim].centroid);
            if (d < best || (d == best && live[i].key < live[host].key)) {
                best = d;
                host = i;
            }
        }
        Cell& h = live[host];
        Cell& v = live[victim];
        h.points.insert(h.points.end(), v.points.begin(), v.points.end());
        h.bounds.merge(v.bounds);
        h.key = std::min(h.key, v.key);
        h.recompute_centroid(cloud);
        live.erase(live.begin() + victim);
    }

    std::sort(live.begin(), live.end(),
              [](const Cell& a, const Cell& b) { return a.key < b.key; });

    const std::vector<double> rho =
        knn_density(cloud, std::min<int>(density_k, int(cloud.size()) - 1));

    out.blocks.resize(live.size());
    for (std::size_t b = 0; b < live.size(); ++b) {
        SpatialBlock& blk = out.blocks[b];
        blk.id = int(b);
        blk.bounds = live[b].bounds;
        blk.point_indices = std::move(live[b].points);
        std::sort(blk.point_indices.begin(), blk.point_indices.end());
        blk.centroid = live[b].centroid;
        std::vector<double> member_rho;
        member_rho.reserve(blk.point_indices.size());
        for (int i : blk.point_indices) member_rho.push_back(rho[i]);
        blk.rho = stats::median(member_rho);
    }

    // Primitive assignment: containing block, nearest centroid among
    // candidates, nearest centroid overall when outside every block.
    for (std::size_t pi = 0; pi < primitives.size(); ++pi) {
        const Vec3& pos = primitives[pi].position;
        int best_block = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& blk : out.blocks) {
            if (!blk.bounds.contains(pos)) continue;
            const double d = dist2(blk.centroid, pos);
            if (d < best_d) {
                best_d = d;
                best_block = blk.id;
            }
        }
        if (best_block < 0) {
            for (const auto& blk : out.blocks) {
                const double d = dist2(blk.centroid, pos);
                if (d < best_d) {
                    best_d = d;
                    best_block = blk.id;
                }
            }
        }
        out.blocks[best_block].gaussian_indices.push_back(int(pi));
    }
    return out;
}

const char* to_string(Tercile t) {
    switch (t) {
        case Tercile::q1_dense: return "Q1";
        case Tercile::q2_mid: return "Q2";
        case Tercile::q3_sparse: return "Q3";
    }
    return "Q3";
}

Stratification stratify_terciles(std::span<const SpatialBlock> blocks) {
    if (blocks.size() < 3)
        throw std::invalid_argument("stratify_terciles: need at least 3 blocks");
    std::vector<const SpatialBlock*> sorted;
    sorted.reserve(blocks.size());
    for (const auto& b : blocks) sorted.push_back(&b);
    std::sort(sorted.begin(), sorted.end(),
              [](const SpatialBlock* a, const SpatialBlock* b) {
                  return a->rho != b->rho ? a->rho > b->rho : a->id < b->id;
              });

    const int n = int(blocks.size());
    const int base = n / 3, rem = n % 3;
    const std::array<int, 3> sizes = {base + (rem > 0 ? 1 : 0),
                                      base + (rem > 1 ? 1 : 0), base};

    Stratification strat;
    int max_id = 0;
    for (const auto& b : blocks) max_id = std::max(max_id, b.id);
    strat.tercile_of_block.assign(max_id + 1, Tercile::q3_sparse);
    int cursor = 0;
    for (int t = 0; t < 3; ++t) {
        for (int i = 0; i < sizes[t]; ++i, ++cursor)
            strat.tercile_of_block[sorted[cursor]->id] = Tercile(t);
        strat.counts[t] = sizes[t];
    }
    return strat;
}

ingest::Json stratification_json(std::span<const SpatialBlock> blocks,
                                 const Stratification& strat) {
    using ingest::Json;
    Json arr = Json::array();
    for (const auto& b : blocks) {
        Json jb = Json::object();
        jb["id"] = b.id;
        Json bounds = Json::object();
        bounds["lo"] = Json::array_of(std::vector<double>{b.bounds.lo.x, b.bounds.lo.y, b.bounds.lo.z});
        bounds["hi"] = Json::array_of(std::vector<double>{b.bounds.hi.x, b.bounds.hi.y, b.bounds.hi.z});
        jb["bounds"] = std::move(bounds);
        jb["n_points"] = b.point_indices.size();
        jb["n_gaussians"] = b.gaussian_indices.size();
        jb["rho"] = b.rho;
        jb["tercile"] = to_string(strat.tercile_of_block[b.id]);
        arr.push_back(std::move(jb));
    }
    Json j = Json::object();
    j["blocks"] = std::move(arr);
    return j;
}

namespace {

TercileDistances summarize(std::vector<double>& d) {
    TercileDistances t;
    t.n = d.size();
    if (!d.empty()) {
        t.median = stats::median(d);
        t.p90 = stats::percentile(d, 90.0);
    }
    return t;
}

}  // namespace

CoverageReport coverage_divergence(const PointCloud& cloud,
                                   std::span<const GaussianPrimitive> primitives,
                                   std::span<const SpatialBlock> blocks,
                                   const Stratification& strat) {
    if (cloud.size() == 0 || primitives.empty())
        throw std::invalid_argument("coverage_divergence: empty input");

    const KdTree tree(cloud.positions);
    CoverageReport rep;
    rep.distances.resize(primitives.size());
    for (std::size_t i = 0; i < primitives.size(); ++i)
        rep.distances[i] = std::sqrt(tree.nearest(primitives[i].position).dist2);

    std::array<std::vector<double>, 3> per;
    for (const auto& blk : blocks) {
        const int t = int(strat.tercile_of_block[blk.id]);
        for (int gi : blk.gaussian_indices)
            per[t].push_back(rep.distances[gi]);
    }
    for (int t = 0; t < 3; ++t) rep.per_tercile[t] = summarize(per[t]);
    std::vector<double> all = rep.distances;
    rep.global = summarize(all);

    const double hi = *std::max_element(rep.distances.begin(), rep.distances.end());
    rep.histogram = stats::build_histogram(rep.distances, 128, 0.0,
                                           hi > 0.0 ? hi : 1.0);
    return rep;
}

ingest::Json CoverageReport::to_json() const {
    using ingest::Json;
    Json j = Json::object();
    Json terciles = Json::object();
    const char* names[3] = {"Q1", "Q2", "Q3"};
    for (int t = 0; t < 3; ++t) {
        Json jt = Json::object();
        jt["n"] = per_tercile[t].n;
        jt["median"] = per_tercile[t].median;
        jt["p90"] = per_tercile[t].p90;
        terciles[names[t]] = std::move(jt);
    }
    j["per_tercile"] = std::move(terciles);
    Json g = Json::object();
    g["n"] = global.n;
    g["median"] = global.median;
    g["p90"] = global.p90;
    j["global"] = std::move(g);
    j["histogram"] = histogram.to_json();
    return j;
}

}  // namespace splatlab::density
