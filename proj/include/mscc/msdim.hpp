#pragma once

#include "mscc/geometry.hpp"
#include "mscc/scales.hpp"
#include "mscc/spatial_index.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mscc {

// PCA eigenvalue proportions p_i = lambda_i / sum(lambda), sorted
// p1 >= p2 >= p3, summing to 1. Quantifies how 1D/2D/3D a neighborhood is.
struct EigenProportions {
    double p1 = 0, p2 = 0, p3 = 0;
};

// Fixed corner convention for the dimensionality triangle: 1D at the origin,
// 2D at (1,0), 3D at (1/2, sqrt(3)/2) (equilateral).
inline constexpr Vec2 kCorner1D{0.0, 0.0};
inline constexpr Vec2 kCorner2D{1.0, 0.0};
inline constexpr Vec2 kCorner3D{0.5, 0.86602540378443864676};

// Eigen-decomposes the covariance of mean-centered coordinates (1/n
// normalization; proportions are normalization-free). Eigenvalues are
// clamped to 0 below 1e-12 relative. Throws NumericError for fewer than
// 3 points or zero total variance; callers mark those scales missing.
EigenProportions eigen_proportions(std::span<const Point3> neighbors);

Vec2 barycentric(const EigenProportions& p);

// Per-core-point multi-scale descriptor. xy[k] is the triangle embedding at
// scale k; n[k] the neighbor count; missing[k] records scales with fewer
// than 3 neighbors before propagation filled them.
struct DimFeature {
    std::vector<Vec2> xy;
    std::vector<uint32_t> n;
    std::vector<uint8_t> missing;
    double vertical_angle = 0; // radians from vertical, folded into [0, pi/2]
    double density = 0;        // points/m^3 at the largest non-missing scale
    bool usable = false;       // false when every scale is missing

    size_t scale_count() const { return xy.size(); }
};

// Propagates the closest available LARGER scale into each missing scale;
// a missing scale above every available one takes the nearest smaller scale.
// Missing flags are preserved for diagnostics. No-op on unusable features.
void fill_missing_scales(DimFeature& f);

// Multi-scale feature at one location. The index must cover the FULL scene
// cloud; the feature is computed at core points but every scene point feeds
// the neighborhoods. The center participates in its own neighborhood when it
// lies in the cloud.
DimFeature compute_feature(const SpatialIndex& index, const Point3& center,
                           const ScaleSet& scales);

struct FeatureSet {
    ScaleSet scales;
    std::vector<Point3> cores;
    std::vector<DimFeature> rows;
    // provenance, echoed into the on-disk header
    std::string source;
    double d_min = 0;
    std::vector<std::string> header_comments;

    size_t size() const { return rows.size(); }
};

// One row per core point, order preserved; rows are computed independently
// and the result is identical for any worker count. A row whose every scale
// is missing is marked unusable, never aborting the batch.
FeatureSet compute_features_batch(const SpatialIndex& scene_index, const CorePointSet& cores,
                                  const ScaleSet& scales, unsigned workers = 0);

// Flattened classifier input (x_1, y_1, ..., x_Ns, y_Ns), scales ascending;
// optionally appends the vertical angle.
std::vector<double> feature_vector(const DimFeature& f, bool with_vertical_angle);

} // namespace mscc
