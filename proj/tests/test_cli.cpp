#include "mscc/featureset_io.hpp"
#include "mscc/pointcloud.hpp"
#include "mscc/textio.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

// End-to-end runs of the installed binary. MSCC_BIN is injected by CMake.
#ifndef MSCC_BIN
#define MSCC_BIN "mscc"
#endif

namespace {

namespace fs = std::filesystem;

struct Sandbox {
    fs::path dir;
    Sandbox() {
        dir = fs::path("cli_sandbox");
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args, std::string* output = nullptr) {
    const std::string log = "cli_last_output.txt";
    const std::string cmd = std::string(MSCC_BIN) + " " + args + " > " + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (output) *output = mscc::read_text_file(log);
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::string scene_spec() {
    return "seed 4\n"
           "extent 6 6\n"
           "density 2200\n"
           "ground ripples 0.015 0.4\n"
           "noise 0.003\n"
           "veg_density 40000\n"
           "veg patch 0.5 5.5 0.5 5.5 10 0.12 0.3\n";
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("full pipeline: synth, features, train, classify, validate") {
    Sandbox sb;
    write_file(sb / "scene.cfg", scene_spec());
    std::string out;

    REQUIRE(run("synth --spec " + (sb / "scene.cfg") + " --out " + (sb / "scene.xyz"), &out) == 0);

    // split the labeled scene into class clouds for training
    std::vector<std::string> labels;
    const auto cloud = mscc::load_xyz_labeled(sb / "scene.xyz", labels);
    std::ofstream veg(sb / "veg.xyz"), ground(sb / "ground.xyz");
    for (size_t i = 0; i < cloud.size(); ++i) {
        auto& dst = labels[i] == "vegetation" ? veg : ground;
        dst << cloud[i].x << ' ' << cloud[i].y << ' ' << cloud[i].z << '\n';
    }
    veg.close();
    ground.close();

    const std::string scales = "0.05,0.1,0.2,0.4";
    REQUIRE(run("features --in " + (sb / "veg.xyz") + " --scales " + scales + " --core-dmin 0.08 --out " +
                (sb / "veg.msf"),
                &out) == 0);
    REQUIRE(run("features --in " + (sb / "ground.xyz") + " --scales " + scales +
                " --core-dmin 0.08 --out " + (sb / "ground.msf"),
                &out) == 0);

    REQUIRE(run("train --pos " + (sb / "veg.msf") + " --neg " + (sb / "ground.msf") +
                " --labels vegetation,ground --method lda --out " + (sb / "clf.svg") +
                " --report " + (sb / "report.txt"),
                &out) == 0);
    CHECK(out.find("training ba:") != std::string::npos);

    REQUIRE(run("classify --in " + (sb / "scene.xyz") + " --core-dmin 0.05 --classifier " +
                (sb / "clf.svg") + " --threshold 0.5 --out " + (sb / "labeled.xyz") +
                " --cores-out " + (sb / "cores.txt"),
                &out) == 0);
    CHECK(out.find("0 unlabeled") != std::string::npos);

    REQUIRE(run("validate --pred " + (sb / "labeled.xyz") + " --truth " + (sb / "scene.xyz") +
                " --report " + (sb / "metrics.txt"),
                &out) == 0);
    CHECK(out.find("balanced accuracy:") != std::string::npos);

    // the synthetic patch scene separates well even with desk-scale training
    const std::string report = mscc::read_text_file(sb / "metrics.txt");
    const size_t at = report.find("balanced accuracy: ");
    REQUIRE(at != std::string::npos);
    const double ba = std::stod(report.substr(at + 19));
    CHECK(ba > 0.85);
}

TEST_CASE("scale range grammar expands inclusively") {
    Sandbox sb;
    write_file(sb / "tiny.xyz", "0 0 0\n0.01 0 0\n0 0.01 0\n0.01 0.01 0\n0.005 0.005 0.01\n");
    std::string out;
    REQUIRE(run("features --in " + (sb / "tiny.xyz") + " --scales 0.02:0.01:0.20 --out " +
                (sb / "tiny.msf"),
                &out) == 0);
    const auto fset = mscc::read_featureset(sb / "tiny.msf");
    CHECK(fset.scales.count() == 19);
    CHECK(fset.scales.diameters.front() == 0.02);
    CHECK(fset.scales.diameters.back() == doctest::Approx(0.20).epsilon(1e-12));
}

TEST_CASE("missing input file fails with exit code 2 naming the path") {
    std::string out;
    CHECK(run("features --in nowhere.xyz --scales 0.1 --out x.msf", &out) == 2);
    CHECK(out.find("nowhere.xyz") != std::string::npos);
}

TEST_CASE("bad usage fails with exit code 1") {
    std::string out;
    CHECK(run("features --scales 0.1 --out x.msf", &out) == 1); // missing --in
    CHECK(run("nonsense", &out) == 1);
}

TEST_CASE("reruns with identical config produce identical bytes") {
    Sandbox sb;
    write_file(sb / "scene.cfg", "seed 5\nextent 3 3\ndensity 900\nveg ball 1.5 1.5 0.25\n");
    std::string out;
    REQUIRE(run("synth --spec " + (sb / "scene.cfg") + " --out " + (sb / "a.xyz"), &out) == 0);
    const std::string scene_once = mscc::read_text_file(sb / "a.xyz");
    REQUIRE(run("synth --spec " + (sb / "scene.cfg") + " --out " + (sb / "a.xyz"), &out) == 0);
    CHECK(scene_once == mscc::read_text_file(sb / "a.xyz"));

    // the worker count is a runtime knob: not echoed, no output effect
    REQUIRE(run("features --in " + (sb / "a.xyz") + " --scales 0.1,0.3 --core-dmin 0.1 --out " +
                (sb / "a.msf") + " --workers 1",
                &out) == 0);
    const std::string msf_once = mscc::read_text_file(sb / "a.msf");
    REQUIRE(run("features --in " + (sb / "a.xyz") + " --scales 0.1,0.3 --core-dmin 0.1 --out " +
                (sb / "a.msf") + " --workers 7",
                &out) == 0);
    CHECK(msf_once == mscc::read_text_file(sb / "a.msf"));

    // provenance header present
    CHECK(msf_once.find("# mscc ") != std::string::npos);
    CHECK(msf_once.find("# config: features") != std::string::npos);
    CHECK(msf_once.find("fnv1a=") != std::string::npos);
}

TEST_CASE("mismatched scale lists abort training with a data error") {
    Sandbox sb;
    write_file(sb / "scene.cfg", "seed 6\nextent 3 3\ndensity 1200\nveg ball 1.5 1.5 0.3\n");
    std::string out;
    REQUIRE(run("synth --spec " + (sb / "scene.cfg") + " --out " + (sb / "s.xyz"), &out) == 0);
    REQUIRE(run("features --in " + (sb / "s.xyz") + " --scales 0.1,0.2 --core-dmin 0.1 --out " +
                (sb / "a.msf"),
                &out) == 0);
    REQUIRE(run("features --in " + (sb / "s.xyz") + " --scales 0.1,0.3 --core-dmin 0.1 --out " +
                (sb / "b.msf"),
                &out) == 0);
    CHECK(run("train --pos " + (sb / "a.msf") + " --neg " + (sb / "b.msf") + " --out " +
              (sb / "c.svg"),
              &out) == 2);
    CHECK(out.find("scale list mismatch") != std::string::npos);
}

TEST_CASE("lda and svm produce comparable classifiers via the cli") {
    Sandbox sb;
    write_file(sb / "scene.cfg", scene_spec());
    std::string out;
    REQUIRE(run("synth --spec " + (sb / "scene.cfg") + " --out " + (sb / "scene.xyz"), &out) == 0);
    std::vector<std::string> labels;
    const auto cloud = mscc::load_xyz_labeled(sb / "scene.xyz", labels);
    std::ofstream veg(sb / "veg.xyz"), ground(sb / "ground.xyz");
    for (size_t i = 0; i < cloud.size(); ++i) {
        auto& dst = labels[i] == "vegetation" ? veg : ground;
        dst << cloud[i].x << ' ' << cloud[i].y << ' ' << cloud[i].z << '\n';
    }
    veg.close();
    ground.close();
    REQUIRE(run("features --in " + (sb / "veg.xyz") + " --scales 0.05,0.15,0.35 --core-dmin 0.1 --out " +
                (sb / "veg.msf"),
                &out) == 0);
    REQUIRE(run("features --in " + (sb / "ground.xyz") +
                " --scales 0.05,0.15,0.35 --core-dmin 0.1 --out " + (sb / "ground.msf"),
                &out) == 0);

    auto train_ba = [&](const std::string& method, const std::string& file) {
        std::string text;
        REQUIRE(run("train --pos " + (sb / "veg.msf") + " --neg " + (sb / "ground.msf") +
                    " --method " + method + " --out " + (sb / file),
                    &text) == 0);
        const size_t at = text.find("training ba: ");
        REQUIRE(at != std::string::npos);
        return std::stod(text.substr(at + 13));
    };
    const double ba_lda = train_ba("lda", "lda.svg");
    const double ba_svm = train_ba("svm", "svm.svg");
    CHECK(std::abs(ba_lda - ba_svm) <= 0.02);
}

TEST_CASE("raising the threshold never shrinks the unlabeled set") {
    Sandbox sb;
    write_file(sb / "scene.cfg", scene_spec());
    std::string out;
    REQUIRE(run("synth --spec " + (sb / "scene.cfg") + " --out " + (sb / "scene.xyz"), &out) == 0);
    std::vector<std::string> labels;
    const auto cloud = mscc::load_xyz_labeled(sb / "scene.xyz", labels);
    std::ofstream veg(sb / "veg.xyz"), ground(sb / "ground.xyz");
    for (size_t i = 0; i < cloud.size(); ++i) {
        auto& dst = labels[i] == "vegetation" ? veg : ground;
        dst << cloud[i].x << ' ' << cloud[i].y << ' ' << cloud[i].z << '\n';
    }
    veg.close();
    ground.close();
    const std::string scales = "0.05,0.15,0.35";
    REQUIRE(run("features --in " + (sb / "veg.xyz") + " --scales " + scales +
                " --core-dmin 0.1 --out " + (sb / "veg.msf"),
                &out) == 0);
    REQUIRE(run("features --in " + (sb / "ground.xyz") + " --scales " + scales +
                " --core-dmin 0.1 --out " + (sb / "ground.msf"),
                &out) == 0);
    REQUIRE(run("train --pos " + (sb / "veg.msf") + " --neg " + (sb / "ground.msf") + " --out " +
                (sb / "clf.svg"),
                &out) == 0);
    REQUIRE(run("features --in " + (sb / "scene.xyz") + " --scales " + scales +
                " --core-dmin 0.06 --out " + (sb / "scene.msf"),
                &out) == 0);

    auto unlabeled_at = [&](const std::string& tau) {
        std::string text;
        REQUIRE(run("classify --features " + (sb / "scene.msf") + " --classifier " +
                    (sb / "clf.svg") + " --threshold " + tau + " --out " + (sb / "out.xyz"),
                    &text) == 0);
        const size_t at = text.find("core points, ");
        REQUIRE(at != std::string::npos);
        return std::stol(text.substr(at + 13));
    };
    const long u50 = unlabeled_at("0.5");
    const long u90 = unlabeled_at("0.9");
    CHECK(u50 == 0);
    CHECK(u90 >= u50);
}

} // TEST_SUITE
