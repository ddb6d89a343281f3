#pragma once

#include "mscc/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mscc {

struct PointCloud {
    std::vector<Point3> points;

    size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    const Point3& operator[](size_t i) const { return points[i]; }
};

// Plain-text XYZ: one point per non-empty, non-'#' line, first three
// whitespace-separated fields are x y z (extra fields ignored). Point order
// follows file order; indices are durable identifiers.
PointCloud load_xyz(const std::string& path);

// As load_xyz, but also captures the 4th column of each point line.
// Lines lacking a 4th column get an empty string.
PointCloud load_xyz_labeled(const std::string& path, std::vector<std::string>& labels);

// `header` lines are emitted verbatim before the data (provenance comments).
// `extra` holds one trailing token per point (label, source index, ...).
void save_xyz(const std::string& path, const PointCloud& cloud,
              const std::vector<std::string>& header,
              const std::vector<std::string>* extra = nullptr);

} // namespace mscc
