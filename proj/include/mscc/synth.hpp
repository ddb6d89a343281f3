#pragma once

#include "mscc/geometry.hpp"
#include "mscc/pointcloud.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mscc {

// Synthetic labeled scenes: the desk-scale stand-in for field scans used by
// tests and benchmarks. Identical specs generate bit-identical clouds.

struct GroundModel {
    enum class Kind { Flat, Ripples, Rough };
    Kind kind = Kind::Flat;
    double amplitude = 0;
    double wavelength = 1;
};

struct VegBall {
    double x = 0, y = 0, r = 0.2;
};

struct VegPlant {
    double x = 0, y = 0, height = 0.3, canopy_r = 0.15;
};

// random placements in a region, radii uniform in [rmin, rmax],
// ball or stem+canopy chosen per placement
struct VegPatch {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    int count = 0;
    double rmin = 0.1, rmax = 0.3;
};

struct Boulder {
    double x = 0, y = 0;
    double a = 0.3, b = 0.3, c = 0.3; // ellipsoid semi-axes, shell sampling
};

struct WaterSheet {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    double z = 0;
    double noise = 0.02; // vertical sigma of the uncorrelated water surface
};

struct SceneSpec {
    uint64_t seed = 1;
    double extent_x = 10, extent_y = 10; // scene covers [0,ex] x [0,ey]
    double density = 2000;               // ground/water points per m^2
    GroundModel ground;
    double ground_noise = 0;   // vertical jitter sigma on ground points
    double veg_density = 8000; // canopy points per m^3
    double stem_density = 300; // stem points per m
    double rock_density = 0;   // boulder shell points per m^2; 0 = use density
    bool has_scanner = false;
    Point3 scanner;
    double falloff = 0;     // radial density falloff scale, 0 = off
    bool occlusion = false; // cast shadows from the scanner position
    std::vector<VegBall> balls;
    std::vector<VegPlant> plants;
    std::vector<VegPatch> patches;
    std::vector<Boulder> boulders;
    std::vector<WaterSheet> water;

    static SceneSpec parse(const std::string& text, const std::string& name);
    static SceneSpec load(const std::string& path);
    void validate() const;
};

struct SyntheticScene {
    PointCloud cloud;
    std::vector<std::string> labels; // one of ground/vegetation/rock/water
};

SyntheticScene generate(const SceneSpec& spec);

// deterministic terrain height at (x, y)
double ground_height(const GroundModel& g, uint64_t seed, double x, double y);

} // namespace mscc
