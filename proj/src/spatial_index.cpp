#include "mscc/spatial_index.hpp"

#include "mscc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace mscc {

namespace {
constexpr uint32_t kLeafSize = 16;

inline double coord(const Point3& p, int axis) {
    return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
}
} // namespace

SpatialIndex::SpatialIndex(const PointCloud& cloud)
    : SpatialIndex(cloud.points.data(), cloud.points.size()) {}

SpatialIndex::SpatialIndex(const Point3* points, size_t count) {
    if (count == 0) throw DataError("cannot index an empty point cloud");
    pts_.assign(points, points + count);
    orig_.resize(count);
    for (size_t i = 0; i < count; ++i) orig_[i] = static_cast<uint32_t>(i);
    nodes_.reserve(2 * count / kLeafSize + 2);
    build(0, static_cast<uint32_t>(count));
}

void SpatialIndex::build(uint32_t begin, uint32_t end) {
    const uint32_t node_idx = static_cast<uint32_t>(nodes_.size());
    nodes_.push_back({begin, end, 0, 0, 0.0});
    if (end - begin <= kLeafSize) return;

    // split along the widest axis of the subtree's bounding box
    double lo[3], hi[3];
    for (int a = 0; a < 3; ++a) lo[a] = hi[a] = coord(pts_[orig_[begin]], a);
    for (uint32_t i = begin + 1; i < end; ++i)
        for (int a = 0; a < 3; ++a) {
            const double c = coord(pts_[orig_[i]], a);
            lo[a] = std::min(lo[a], c);
            hi[a] = std::max(hi[a], c);
        }
    int axis = 0;
    for (int a = 1; a < 3; ++a)
        if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
    if (hi[axis] - lo[axis] == 0) return; // all points coincident: keep as leaf

    const uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(orig_.begin() + begin, orig_.begin() + mid, orig_.begin() + end,
                     [&](uint32_t a, uint32_t b) {
                         return coord(pts_[a], axis) < coord(pts_[b], axis);
                     });
    Node& n = nodes_[node_idx];
    n.axis = axis;
    n.split = coord(pts_[orig_[mid]], axis);
    build(begin, mid);
    nodes_[node_idx].right = static_cast<uint32_t>(nodes_.size());
    build(mid, end);
}

void SpatialIndex::radius_query_dist2(const Point3& center, double radius,
                                      std::vector<std::pair<uint32_t, double>>& out) const {
    if (!(radius > 0)) throw UsageError("radius_query requires a positive radius");
    const double r2 = radius * radius;
    uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const uint32_t ni = stack[--top];
        const Node& n = nodes_[ni];
        if (n.right == 0) {
            for (uint32_t i = n.begin; i < n.end; ++i) {
                const uint32_t pi = orig_[i];
                const double d2 = dist2(center, pts_[pi]);
                if (d2 <= r2) out.emplace_back(pi, d2);
            }
            continue;
        }
        const double c = coord(center, n.axis);
        if (c - radius <= n.split) stack[top++] = ni + 1;
        if (c + radius >= n.split) stack[top++] = n.right;
    }
}

std::vector<uint32_t> SpatialIndex::radius_query(const Point3& center, double radius) const {
    std::vector<std::pair<uint32_t, double>> hits;
    radius_query_dist2(center, radius, hits);
    std::vector<uint32_t> out;
    out.reserve(hits.size());
    for (const auto& h : hits) out.push_back(h.first);
    std::sort(out.begin(), out.end());
    return out;
}

size_t SpatialIndex::radius_count(const Point3& center, double radius) const {
    std::vector<std::pair<uint32_t, double>> hits;
    radius_query_dist2(center, radius, hits);
    return hits.size();
}

void SpatialIndex::nearest_walk(uint32_t node, const Point3& p, double& best_d2,
                                uint32_t& best_idx) const {
    const Node& n = nodes_[node];
    if (n.right == 0) {
        for (uint32_t i = n.begin; i < n.end; ++i) {
            const uint32_t pi = orig_[i];
            const double d2 = dist2(p, pts_[pi]);
            if (d2 < best_d2 || (d2 == best_d2 && pi < best_idx)) {
                best_d2 = d2;
                best_idx = pi;
            }
        }
        return;
    }
    const double diff = coord(p, n.axis) - n.split;
    const uint32_t near_child = diff < 0 ? node + 1 : n.right;
    const uint32_t far_child = diff < 0 ? n.right : node + 1;
    nearest_walk(near_child, p, best_d2, best_idx);
    // non-strict bound so equal-distance points in the far subtree are
    // still visited (lowest-index tie rule)
    if (diff * diff <= best_d2) nearest_walk(far_child, p, best_d2, best_idx);
}

uint32_t SpatialIndex::nearest(const Point3& p) const {
    double best_d2 = std::numeric_limits<double>::infinity();
    uint32_t best_idx = std::numeric_limits<uint32_t>::max();
    nearest_walk(0, p, best_d2, best_idx);
    return best_idx;
}

namespace {

struct CellKey {
    int64_t cx, cy, cz;
    bool operator==(const CellKey&) const = default;
};

struct CellHash {
    size_t operator()(const CellKey& k) const {
        uint64_t h = 0x9e3779b97f4a7c15ull;
        for (uint64_t v : {static_cast<uint64_t>(k.cx), static_cast<uint64_t>(k.cy),
                           static_cast<uint64_t>(k.cz)}) {
            v *= 0xbf58476d1ce4e5b9ull;
            v ^= v >> 27;
            h = (h ^ v) * 0x94d049bb133111ebull;
        }
        return static_cast<size_t>(h);
    }
};

} // namespace

CorePointSet subsample_min_distance(const PointCloud& cloud, double d_min) {
    if (!(d_min > 0)) throw UsageError("subsample_min_distance requires d_min > 0");
    CorePointSet out;
    out.d_min = d_min;
    // hash grid at cell size d_min: candidates closer than d_min can only
    // live in the 27 surrounding cells
    std::unordered_map<CellKey, std::vector<uint32_t>, CellHash> grid;
    grid.reserve(cloud.size() / 4 + 1);
    const double inv = 1.0 / d_min;
    const double d2min = d_min * d_min;
    for (size_t i = 0; i < cloud.size(); ++i) {
        const Point3& p = cloud[i];
        const CellKey key{static_cast<int64_t>(std::floor(p.x * inv)),
                          static_cast<int64_t>(std::floor(p.y * inv)),
                          static_cast<int64_t>(std::floor(p.z * inv))};
        bool blocked = false;
        for (int64_t dz = -1; dz <= 1 && !blocked; ++dz)
            for (int64_t dy = -1; dy <= 1 && !blocked; ++dy)
                for (int64_t dx = -1; dx <= 1 && !blocked; ++dx) {
                    auto it = grid.find(CellKey{key.cx + dx, key.cy + dy, key.cz + dz});
                    if (it == grid.end()) continue;
                    for (uint32_t ci : it->second) {
                        if (dist2(p, out.points[ci]) < d2min) {
                            blocked = true;
                            break;
                        }
                    }
                }
        if (blocked) continue;
        grid[key].push_back(static_cast<uint32_t>(out.points.size()));
        out.points.push_back(p);
        out.source_indices.push_back(static_cast<uint32_t>(i));
    }
    return out;
}

} // namespace mscc
