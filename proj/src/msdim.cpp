#include "mscc/msdim.hpp"

#include "mscc/errors.hpp"
#include "mscc/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mscc {

namespace {

// Relative clamp threshold for rounding-induced negative eigenvalues.
constexpr double kEigenClampRel = 1e-12;

struct PcaResult {
    EigenProportions props;
    Eigen::Vector3d normal; // eigenvector of the smallest eigenvalue
    bool valid = false;     // false on zero total variance
};

PcaResult pca_of_covariance(const Eigen::Matrix3d& cov) {
    PcaResult out;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
    Eigen::Vector3d ev = solver.eigenvalues(); // ascending
    const double lmax = ev[2];
    for (int i = 0; i < 3; ++i)
        if (ev[i] < 0 && ev[i] >= -kEigenClampRel * std::abs(lmax)) ev[i] = 0;
    for (int i = 0; i < 3; ++i)
        if (ev[i] < 0) ev[i] = 0; // larger negatives only arise from degenerate input
    const double total = ev[0] + ev[1] + ev[2];
    if (!(total > 0)) return out;
    out.props = EigenProportions{ev[2] / total, ev[1] / total, ev[0] / total};
    out.normal = solver.eigenvectors().col(0);
    out.valid = true;
    return out;
}

} // namespace

EigenProportions eigen_proportions(std::span<const Point3> neighbors) {
    if (neighbors.size() < 3)
        throw NumericError("eigen_proportions requires at least 3 points");
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const Point3& p : neighbors) mean += Eigen::Vector3d(p.x, p.y, p.z);
    mean /= static_cast<double>(neighbors.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const Point3& p : neighbors) {
        const Eigen::Vector3d d = Eigen::Vector3d(p.x, p.y, p.z) - mean;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(neighbors.size());
    const PcaResult r = pca_of_covariance(cov);
    if (!r.valid) throw NumericError("eigen_proportions: zero total variance");
    return r.props;
}

Vec2 barycentric(const EigenProportions& p) {
    return kCorner1D * p.p1 + kCorner2D * p.p2 + kCorner3D * p.p3;
}

void fill_missing_scales(DimFeature& f) {
    const size_t ns = f.scale_count();
    size_t valid_count = 0;
    for (size_t k = 0; k < ns; ++k)
        if (!f.missing[k]) ++valid_count;
    if (valid_count == 0)
        throw NumericError("fill_missing_scales: every scale is missing");
    for (size_t k = 0; k < ns; ++k) {
        if (!f.missing[k]) continue;
        // closest available larger scale; nearest smaller one when no
        // larger scale is available
        size_t src = ns;
        for (size_t j = k + 1; j < ns; ++j)
            if (!f.missing[j]) { src = j; break; }
        if (src == ns) {
            for (size_t j = k; j-- > 0;)
                if (!f.missing[j]) { src = j; break; }
        }
        f.xy[k] = f.xy[src];
    }
}

DimFeature compute_feature(const SpatialIndex& index, const Point3& center,
                           const ScaleSet& scales) {
    const size_t ns = scales.count();
    DimFeature out;
    out.xy.assign(ns, Vec2{});
    out.n.assign(ns, 0);
    out.missing.assign(ns, 1);
    out.vertical_angle = std::numeric_limits<double>::quiet_NaN();
    out.density = 0;

    std::vector<std::pair<uint32_t, double>> hits;
    index.radius_query_dist2(center, scales.largest() / 2.0, hits);
    // accumulate in (distance, index) order: deterministic and identical
    // for the full ball and for every prefix
    std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
        return a.second < b.second || (a.second == b.second && a.first < b.first);
    });

    // coordinates re-centered on the query point keep the running sums well
    // conditioned; PCA subtracts the neighborhood mean afterwards
    double sx = 0, sy = 0, sz = 0;
    double sxx = 0, sxy = 0, sxz = 0, syy = 0, syz = 0, szz = 0;
    size_t taken = 0;

    double largest_valid_radius = 0;
    size_t largest_valid_count = 0;
    Eigen::Vector3d largest_valid_normal = Eigen::Vector3d::UnitZ();
    bool any_valid = false;

    for (size_t k = 0; k < ns; ++k) {
        const double r = scales.diameters[k] / 2.0;
        const double r2 = r * r;
        while (taken < hits.size() && hits[taken].second <= r2) {
            const Point3 q = index.point(hits[taken].first) - center;
            sx += q.x; sy += q.y; sz += q.z;
            sxx += q.x * q.x; sxy += q.x * q.y; sxz += q.x * q.z;
            syy += q.y * q.y; syz += q.y * q.z; szz += q.z * q.z;
            ++taken;
        }
        out.n[k] = static_cast<uint32_t>(taken);
        if (taken < 3) continue;
        const double inv = 1.0 / static_cast<double>(taken);
        const double mx = sx * inv, my = sy * inv, mz = sz * inv;
        Eigen::Matrix3d cov;
        cov << sxx * inv - mx * mx, sxy * inv - mx * my, sxz * inv - mx * mz,
               sxy * inv - mx * my, syy * inv - my * my, syz * inv - my * mz,
               sxz * inv - mx * mz, syz * inv - my * mz, szz * inv - mz * mz;
        const PcaResult pca = pca_of_covariance(cov);
        if (!pca.valid) continue; // coincident points: leave the scale missing
        out.xy[k] = barycentric(pca.props);
        out.missing[k] = 0;
        any_valid = true;
        largest_valid_radius = r;
        largest_valid_count = taken;
        largest_valid_normal = pca.normal;
    }

    out.usable = any_valid;
    if (!any_valid) return out;

    // vertical angle and local density recorded at the largest valid scale
    const double cosv = std::min(1.0, std::abs(largest_valid_normal.z()));
    out.vertical_angle = std::acos(cosv);
    const double volume =
        4.0 / 3.0 * std::numbers::pi * largest_valid_radius * largest_valid_radius *
        largest_valid_radius;
    out.density = static_cast<double>(largest_valid_count) / volume;

    fill_missing_scales(out);
    return out;
}

FeatureSet compute_features_batch(const SpatialIndex& scene_index, const CorePointSet& cores,
                                  const ScaleSet& scales, unsigned workers) {
    scales.validate();
    FeatureSet fs;
    fs.scales = scales;
    fs.cores = cores.points;
    fs.d_min = cores.d_min;
    fs.rows.resize(cores.size());
    parallel_for(cores.size(), workers, [&](size_t i) {
        fs.rows[i] = compute_feature(scene_index, cores.points[i], scales);
    });
    return fs;
}

std::vector<double> feature_vector(const DimFeature& f, bool with_vertical_angle) {
    std::vector<double> v;
    v.reserve(2 * f.scale_count() + (with_vertical_angle ? 1 : 0));
    for (const Vec2& xy : f.xy) {
        v.push_back(xy.x);
        v.push_back(xy.y);
    }
    if (with_vertical_angle) v.push_back(f.vertical_angle);
    return v;
}

} // namespace mscc
