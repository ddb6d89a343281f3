#pragma once

#include "mscc/geometry.hpp"
#include "mscc/pointcloud.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace mscc {

// Exact fixed-radius and nearest-neighbor queries over an immutable point
// set. kd-tree with median splits; queries never approximate: results are
// set-equal to a brute-force scan. Read-only after construction, safe for
// concurrent queries.
class SpatialIndex {
public:
    explicit SpatialIndex(const PointCloud& cloud);
    SpatialIndex(const Point3* points, size_t count);

    size_t size() const { return pts_.size(); }

    // coordinates of the point with the given original index
    const Point3& point(uint32_t original_index) const { return pts_[original_index]; }

    // Indices of all points with distance <= radius (closed ball), ascending.
    std::vector<uint32_t> radius_query(const Point3& center, double radius) const;

    // Same ball, but returns (original index, squared distance) pairs in
    // tree order; callers that need an order sort themselves.
    void radius_query_dist2(const Point3& center, double radius,
                            std::vector<std::pair<uint32_t, double>>& out) const;

    size_t radius_count(const Point3& center, double radius) const;

    // Index of the closest point; exact ties resolved to the lowest index.
    uint32_t nearest(const Point3& p) const;

private:
    struct Node {
        uint32_t begin, end; // leaf point range when right == 0
        uint32_t right;      // right child node (left child is self+1), 0 for leaf
        int axis;
        double split;
    };

    void build(uint32_t begin, uint32_t end);
    void nearest_walk(uint32_t node, const Point3& p, double& best_d2, uint32_t& best_idx) const;

    std::vector<Point3> pts_;       // permuted into tree layout
    std::vector<uint32_t> orig_;    // pts_[i] is cloud point orig_[i]
    std::vector<Node> nodes_;
};

// Spatially homogeneous subsample: core points plus their source indices.
struct CorePointSet {
    std::vector<Point3> points;
    std::vector<uint32_t> source_indices; // empty when loaded standalone
    double d_min = 0;

    size_t size() const { return points.size(); }
};

// Greedy in-order retention: a point is kept iff no previously kept point
// lies within d_min. Guarantees pairwise spacing >= d_min and coverage of
// every source point within d_min of some core point.
CorePointSet subsample_min_distance(const PointCloud& cloud, double d_min);

inline uint32_t nearest_core(const SpatialIndex& core_index, const Point3& p) {
    return core_index.nearest(p);
}

} // namespace mscc
