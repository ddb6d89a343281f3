#include "mscc/synth.hpp"

#include "mscc/errors.hpp"
#include "mscc/rng.hpp"
#include "mscc/textio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mscc {

namespace {

uint64_t hash_cell(int64_t ix, int64_t iy, uint64_t seed) {
    uint64_t h = seed ^ 0x9e3779b97f4a7c15ull;
    for (uint64_t v : {static_cast<uint64_t>(ix), static_cast<uint64_t>(iy)}) {
        v += 0x9e3779b97f4a7c15ull;
        v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ull;
        v = (v ^ (v >> 27)) * 0x94d049bb133111ebull;
        h ^= v ^ (v >> 31);
        h *= 0xff51afd7ed558ccdull;
    }
    return h;
}

double lattice(int64_t ix, int64_t iy, uint64_t seed) {
    return static_cast<double>(hash_cell(ix, iy, seed) >> 11) * 0x1.0p-52 - 1.0; // [-1, 1)
}

double value_noise(double x, double y, uint64_t seed) {
    const double fx = std::floor(x), fy = std::floor(y);
    const int64_t ix = static_cast<int64_t>(fx), iy = static_cast<int64_t>(fy);
    double tx = x - fx, ty = y - fy;
    tx = tx * tx * (3 - 2 * tx); // smoothstep
    ty = ty * ty * (3 - 2 * ty);
    const double v00 = lattice(ix, iy, seed), v10 = lattice(ix + 1, iy, seed);
    const double v01 = lattice(ix, iy + 1, seed), v11 = lattice(ix + 1, iy + 1, seed);
    return (v00 * (1 - tx) + v10 * tx) * (1 - ty) + (v01 * (1 - tx) + v11 * tx) * ty;
}

} // namespace

double ground_height(const GroundModel& g, uint64_t seed, double x, double y) {
    switch (g.kind) {
        case GroundModel::Kind::Flat:
            return 0;
        case GroundModel::Kind::Ripples:
            // quasi-1D sand ripples
            return g.amplitude * std::sin(2 * std::numbers::pi * x / g.wavelength);
        case GroundModel::Kind::Rough: {
            double h = 0, amp = g.amplitude, freq = 1.0 / g.wavelength;
            for (int octave = 0; octave < 4; ++octave) {
                h += amp * value_noise(x * freq, y * freq, seed + static_cast<uint64_t>(octave));
                amp *= 0.5;
                freq *= 2.0;
            }
            return h;
        }
    }
    return 0;
}

void SceneSpec::validate() const {
    if (!(extent_x > 0) || !(extent_y > 0)) throw UsageError("scene extent must be positive");
    if (!(density > 0)) throw UsageError("scene density must be positive");
    if ((occlusion || falloff > 0) && !has_scanner)
        throw UsageError("occlusion/falloff require a scanner position");
}

SceneSpec SceneSpec::parse(const std::string& text, const std::string& name) {
    SceneSpec spec;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw DataError(name + ":" + std::to_string(lineno) + ": " + msg);
    };
    auto want = [&](const std::vector<std::string>& t, size_t n, const char* usage) {
        if (t.size() != n) fail(std::string("expected '") + usage + "'");
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = split_ws(line);
        if (t.empty() || t[0][0] == '#') continue;
        const std::string& key = t[0];
        const std::string ctx = name + ":" + std::to_string(lineno);
        if (key == "seed") {
            want(t, 2, "seed N");
            spec.seed = static_cast<uint64_t>(parse_long(t[1], ctx));
        } else if (key == "extent") {
            want(t, 3, "extent X Y");
            spec.extent_x = parse_double(t[1], ctx);
            spec.extent_y = parse_double(t[2], ctx);
        } else if (key == "density") {
            want(t, 2, "density PTS_PER_M2");
            spec.density = parse_double(t[1], ctx);
        } else if (key == "ground") {
            if (t.size() >= 2 && t[1] == "flat") {
                spec.ground.kind = GroundModel::Kind::Flat;
            } else if (t.size() == 4 && t[1] == "ripples") {
                spec.ground.kind = GroundModel::Kind::Ripples;
                spec.ground.amplitude = parse_double(t[2], ctx);
                spec.ground.wavelength = parse_double(t[3], ctx);
            } else if (t.size() == 4 && t[1] == "rough") {
                spec.ground.kind = GroundModel::Kind::Rough;
                spec.ground.amplitude = parse_double(t[2], ctx);
                spec.ground.wavelength = parse_double(t[3], ctx);
            } else {
                fail("expected 'ground flat|ripples AMP WAVELENGTH|rough AMP WAVELENGTH'");
            }
        } else if (key == "noise") {
            want(t, 2, "noise SIGMA");
            spec.ground_noise = parse_double(t[1], ctx);
        } else if (key == "veg_density") {
            want(t, 2, "veg_density PTS_PER_M3");
            spec.veg_density = parse_double(t[1], ctx);
        } else if (key == "stem_density") {
            want(t, 2, "stem_density PTS_PER_M");
            spec.stem_density = parse_double(t[1], ctx);
        } else if (key == "rock_density") {
            want(t, 2, "rock_density PTS_PER_M2");
            spec.rock_density = parse_double(t[1], ctx);
        } else if (key == "scanner") {
            want(t, 4, "scanner X Y Z");
            spec.has_scanner = true;
            spec.scanner = {parse_double(t[1], ctx), parse_double(t[2], ctx),
                            parse_double(t[3], ctx)};
        } else if (key == "falloff") {
            want(t, 2, "falloff SCALE");
            spec.falloff = parse_double(t[1], ctx);
        } else if (key == "occlusion") {
            want(t, 2, "occlusion on|off");
            spec.occlusion = t[1] == "on";
        } else if (key == "veg") {
            if (t.size() == 5 && t[1] == "ball") {
                spec.balls.push_back({parse_double(t[2], ctx), parse_double(t[3], ctx),
                                      parse_double(t[4], ctx)});
            } else if (t.size() == 6 && t[1] == "plant") {
                spec.plants.push_back({parse_double(t[2], ctx), parse_double(t[3], ctx),
                                       parse_double(t[4], ctx), parse_double(t[5], ctx)});
            } else if (t.size() == 9 && t[1] == "patch") {
                spec.patches.push_back({parse_double(t[2], ctx), parse_double(t[3], ctx),
                                        parse_double(t[4], ctx), parse_double(t[5], ctx),
                                        static_cast<int>(parse_long(t[6], ctx)),
                                        parse_double(t[7], ctx), parse_double(t[8], ctx)});
            } else {
                fail("expected 'veg ball X Y R', 'veg plant X Y HEIGHT CANOPY_R' or "
                     "'veg patch XMIN XMAX YMIN YMAX COUNT RMIN RMAX'");
            }
        } else if (key == "boulder") {
            want(t, 6, "boulder X Y A B C");
            spec.boulders.push_back({parse_double(t[1], ctx), parse_double(t[2], ctx),
                                     parse_double(t[3], ctx), parse_double(t[4], ctx),
                                     parse_double(t[5], ctx)});
        } else if (key == "water") {
            if (t.size() != 6 && t.size() != 7) fail("expected 'water XMIN XMAX YMIN YMAX Z [SIGMA]'");
            WaterSheet w{parse_double(t[1], ctx), parse_double(t[2], ctx), parse_double(t[3], ctx),
                         parse_double(t[4], ctx), parse_double(t[5], ctx), 0.02};
            if (t.size() == 7) w.noise = parse_double(t[6], ctx);
            spec.water.push_back(w);
        } else {
            fail("unknown scene key '" + key + "'");
        }
    }
    spec.validate();
    return spec;
}

SceneSpec SceneSpec::load(const std::string& path) {
    return parse(read_text_file(path), path);
}

namespace {

struct Occluder {
    Point3 center;
    double radius;
};

Point3 unit_direction(Rng& rng) {
    // isotropic via normalized Gaussian triple
    for (;;) {
        const Point3 v{rng.normal(), rng.normal(), rng.normal()};
        const double n = v.norm();
        if (n > 1e-12) return v * (1.0 / n);
    }
}

} // namespace

SyntheticScene generate(const SceneSpec& spec) {
    spec.validate();
    SyntheticScene scene;
    Rng rng(spec.seed);

    auto in_water = [&](double x, double y) {
        for (const auto& w : spec.water)
            if (x >= w.xmin && x <= w.xmax && y >= w.ymin && y <= w.ymax) return true;
        return false;
    };
    auto add = [&](const Point3& p, const char* label) {
        scene.cloud.points.push_back(p);
        scene.labels.emplace_back(label);
    };

    // ground sheet (water rectangles replace the ground there)
    const long n_ground =
        std::lround(spec.density * spec.extent_x * spec.extent_y);
    for (long i = 0; i < n_ground; ++i) {
        const double x = rng.uniform(0, spec.extent_x);
        const double y = rng.uniform(0, spec.extent_y);
        if (in_water(x, y)) continue;
        double z = ground_height(spec.ground, spec.seed, x, y);
        if (spec.ground_noise > 0) z += rng.normal(0, spec.ground_noise);
        add({x, y, z}, "ground");
    }

    // water: noisy quasi-planar sheets
    for (const auto& w : spec.water) {
        const double area = std::max(0.0, w.xmax - w.xmin) * std::max(0.0, w.ymax - w.ymin);
        const long n = std::lround(spec.density * area);
        for (long i = 0; i < n; ++i) {
            const double x = rng.uniform(w.xmin, w.xmax);
            const double y = rng.uniform(w.ymin, w.ymax);
            add({x, y, w.z + rng.normal(0, w.noise)}, "water");
        }
    }

    std::vector<Occluder> occluders;

    auto gen_ball = [&](double cx, double cy, double r) {
        const double gz = ground_height(spec.ground, spec.seed, cx, cy);
        const Point3 center{cx, cy, gz + r};
        const double volume = 4.0 / 3.0 * std::numbers::pi * r * r * r;
        const long n = std::max<long>(1, rng.poisson(spec.veg_density * volume));
        for (long i = 0; i < n; ++i) {
            const Point3 dir = unit_direction(rng);
            const double rad = r * std::cbrt(rng.uniform());
            add(center + dir * rad, "vegetation");
        }
        occluders.push_back({center, r});
    };
    auto gen_plant = [&](double cx, double cy, double height, double canopy_r) {
        const double gz = ground_height(spec.ground, spec.seed, cx, cy);
        const long n_stem = std::max<long>(1, std::lround(spec.stem_density * height));
        for (long i = 0; i < n_stem; ++i) {
            const double h = rng.uniform(0, height);
            add({cx + rng.normal(0, 0.003), cy + rng.normal(0, 0.003), gz + h}, "vegetation");
        }
        const Point3 center{cx, cy, gz + height};
        const double volume = 4.0 / 3.0 * std::numbers::pi * canopy_r * canopy_r * canopy_r;
        const long n = std::max<long>(1, rng.poisson(spec.veg_density * volume));
        for (long i = 0; i < n; ++i) {
            const Point3 dir = unit_direction(rng);
            const double rad = canopy_r * std::cbrt(rng.uniform());
            add(center + dir * rad, "vegetation");
        }
        occluders.push_back({center, canopy_r});
    };

    for (const auto& b : spec.balls) gen_ball(b.x, b.y, b.r);
    for (const auto& p : spec.plants) gen_plant(p.x, p.y, p.height, p.canopy_r);
    for (const auto& patch : spec.patches) {
        for (int i = 0; i < patch.count; ++i) {
            const double x = rng.uniform(patch.xmin, patch.xmax);
            const double y = rng.uniform(patch.ymin, patch.ymax);
            const double r = rng.uniform(patch.rmin, patch.rmax);
            if (rng.uniform() < 0.5) gen_ball(x, y, r);
            else gen_plant(x, y, 2 * r, r);
        }
    }

    for (const auto& bo : spec.boulders) {
        const double gz = ground_height(spec.ground, spec.seed, bo.x, bo.y);
        const Point3 center{bo.x, bo.y, gz + 0.6 * bo.c};
        // Knud Thomsen's surface approximation
        constexpr double p = 1.6075;
        const double ap = std::pow(bo.a, p), bp = std::pow(bo.b, p), cp = std::pow(bo.c, p);
        const double surface =
            4 * std::numbers::pi * std::pow((ap * bp + ap * cp + bp * cp) / 3.0, 1.0 / p);
        const double rho = spec.rock_density > 0 ? spec.rock_density : spec.density;
        const long n = std::max<long>(1, rng.poisson(rho * surface));
        for (long i = 0; i < n; ++i) {
            const Point3 dir = unit_direction(rng);
            const Point3 pt{center.x + bo.a * dir.x, center.y + bo.b * dir.y,
                            center.z + bo.c * dir.z};
            // the buried part of the shell returns no echo
            if (pt.z < ground_height(spec.ground, spec.seed, pt.x, pt.y)) continue;
            add(pt, "rock");
        }
        occluders.push_back({center, std::max({bo.a, bo.b, bo.c})});
    }

    // radial density falloff from the scanner
    if (spec.falloff > 0) {
        PointCloud kept;
        std::vector<std::string> kept_labels;
        for (size_t i = 0; i < scene.cloud.size(); ++i) {
            const double d2 = dist2(scene.cloud[i], spec.scanner);
            const double keep = 1.0 / (1.0 + d2 / (spec.falloff * spec.falloff));
            if (rng.uniform() < keep) {
                kept.points.push_back(scene.cloud[i]);
                kept_labels.push_back(scene.labels[i]);
            }
        }
        scene.cloud = std::move(kept);
        scene.labels = std::move(kept_labels);
    }

    // shadow zones: remove points inside the cone cast by each occluder
    if (spec.occlusion && !occluders.empty()) {
        PointCloud kept;
        std::vector<std::string> kept_labels;
        for (size_t i = 0; i < scene.cloud.size(); ++i) {
            const Point3& pt = scene.cloud[i];
            const Point3 sp = pt - spec.scanner;
            const double d_sp = sp.norm();
            bool occluded = false;
            for (const auto& oc : occluders) {
                const Point3 sc = oc.center - spec.scanner;
                const double d_sc = sc.norm();
                if (d_sc <= oc.radius || d_sp <= d_sc) continue;
                const double cos_ang = sp.dot(sc) / (d_sp * d_sc);
                const double sin_half = oc.radius / d_sc;
                const double cos_half = std::sqrt(std::max(0.0, 1.0 - sin_half * sin_half));
                if (cos_ang > cos_half) {
                    occluded = true;
                    break;
                }
            }
            if (!occluded) {
                kept.points.push_back(pt);
                kept_labels.push_back(scene.labels[i]);
            }
        }
        scene.cloud = std::move(kept);
        scene.labels = std::move(kept_labels);
    }

    if (scene.cloud.empty()) throw NumericError("generated scene has no points");
    return scene;
}

} // namespace mscc
