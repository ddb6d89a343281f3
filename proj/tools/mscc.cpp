// Batch CLI for multi-scale dimensionality classification of 3D point
// clouds: synthetic scenes, feature extraction at core points, classifier
// training, cascade classification and validation.

#include "mscc/classifier.hpp"
#include "mscc/classifier_svg.hpp"
#include "mscc/errors.hpp"
#include "mscc/evaluation.hpp"
#include "mscc/featureset_io.hpp"
#include "mscc/msdim.hpp"
#include "mscc/multiclass.hpp"
#include "mscc/parallel.hpp"
#include "mscc/pointcloud.hpp"
#include "mscc/scales.hpp"
#include "mscc/spatial_index.hpp"
#include "mscc/synth.hpp"
#include "mscc/textio.hpp"
#include "mscc/version.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

using namespace mscc;

std::string tool_line() {
    return std::string(kToolName) + " " + kToolVersion;
}

std::string input_line(const std::string& path) {
    return "input: " + path + " fnv1a=" + digest_file(path);
}

// The worker count is a runtime knob and deliberately left out of the
// config echo: outputs are identical for any worker count.
std::vector<std::string> provenance(const std::string& config,
                                    const std::vector<std::string>& inputs) {
    std::vector<std::string> lines{tool_line(), "config: " + config};
    for (const auto& in : inputs) lines.push_back(input_line(in));
    return lines;
}

std::vector<std::string> comment_block(const std::vector<std::string>& lines) {
    std::vector<std::string> out;
    out.reserve(lines.size());
    for (const auto& l : lines) out.push_back("# " + l);
    return out;
}

void check_label_token(const std::string& label) {
    if (label.empty() || label.find_first_of(" \t\r\n") != std::string::npos)
        throw UsageError("class label '" + label + "' must be a non-empty token without spaces");
}

// ---------------------------------------------------------------------------

struct SynthArgs {
    std::string spec_path, out_path;
};

void run_synth(const SynthArgs& a) {
    const SceneSpec spec = SceneSpec::load(a.spec_path);
    const SyntheticScene scene = generate(spec);
    const auto prov =
        provenance("synth --spec " + a.spec_path + " --out " + a.out_path, {a.spec_path});
    save_xyz(a.out_path, scene.cloud, comment_block(prov), &scene.labels);
    std::cout << "wrote " << scene.cloud.size() << " labeled points to " << a.out_path << "\n";
}

// ---------------------------------------------------------------------------

struct FeaturesArgs {
    std::string in_path, out_path, cores_path, scales_spec;
    double core_dmin = 0;
    unsigned workers = 0;
};

CorePointSet select_cores(const PointCloud& cloud, const FeaturesArgs& a) {
    if (!a.cores_path.empty()) {
        const PointCloud cores_cloud = load_xyz(a.cores_path);
        CorePointSet cores;
        cores.points = cores_cloud.points;
        return cores;
    }
    if (a.core_dmin > 0) return subsample_min_distance(cloud, a.core_dmin);
    // default: every point is a core point
    CorePointSet cores;
    cores.points = cloud.points;
    cores.source_indices.resize(cloud.size());
    for (size_t i = 0; i < cloud.size(); ++i)
        cores.source_indices[i] = static_cast<uint32_t>(i);
    return cores;
}

void run_features(const FeaturesArgs& a) {
    const ScaleSet scales = parse_scales(a.scales_spec);
    const PointCloud cloud = load_xyz(a.in_path);
    const SpatialIndex index(cloud);
    const CorePointSet cores = select_cores(cloud, a);
    FeatureSet fs = compute_features_batch(index, cores, scales, a.workers);
    fs.source = a.in_path;

    std::ostringstream config;
    config << "features --in " << a.in_path << " --scales " << a.scales_spec;
    std::vector<std::string> inputs{a.in_path};
    if (!a.cores_path.empty()) {
        config << " --cores " << a.cores_path;
        inputs.push_back(a.cores_path);
    } else if (a.core_dmin > 0) {
        config << " --core-dmin " << format_double(a.core_dmin);
    }
    config << " --out " << a.out_path;
    fs.header_comments = comment_block(provenance(config.str(), inputs));

    write_featureset(a.out_path, fs);
    size_t usable = 0;
    for (const auto& r : fs.rows)
        if (r.usable) ++usable;
    std::cout << "wrote " << fs.rows.size() << " feature rows (" << usable << " usable, "
              << scales.count() << " scales) to " << a.out_path << "\n";
}

// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string pos_path, neg_path, unlabeled_path, out_path, report_path;
    std::string method = "lda";
    std::string labels = "class+,class-";
    double svm_lambda = 1e-4;
    long svm_iters = 100000;
    uint64_t seed = 9157;
    bool with_vertical = false;
};

void run_train(const TrainArgs& a) {
    const FeatureSet pos = read_featureset(a.pos_path);
    const FeatureSet neg = read_featureset(a.neg_path);
    FeatureSet unlabeled;
    const bool have_unlabeled = !a.unlabeled_path.empty();
    if (have_unlabeled) unlabeled = read_featureset(a.unlabeled_path);

    TrainOptions opt;
    if (a.method == "lda") opt.method = TrainMethod::Lda;
    else if (a.method == "svm") opt.method = TrainMethod::Svm;
    else throw UsageError("method must be lda or svm, got '" + a.method + "'");
    opt.pegasos.lambda = a.svm_lambda;
    opt.pegasos.iterations = a.svm_iters;
    opt.pegasos.seed = a.seed;
    opt.with_vertical_angle = a.with_vertical;
    const size_t comma = a.labels.find(',');
    if (comma == std::string::npos)
        throw UsageError("labels must be POS,NEG, got '" + a.labels + "'");
    opt.label_pos = a.labels.substr(0, comma);
    opt.label_neg = a.labels.substr(comma + 1);
    check_label_token(opt.label_pos);
    check_label_token(opt.label_neg);

    BinaryClassifier clf =
        train_binary_classifier(pos, neg, have_unlabeled ? &unlabeled : nullptr, opt);

    std::ostringstream config;
    config << "train --pos " << a.pos_path << " --neg " << a.neg_path;
    std::vector<std::string> inputs{a.pos_path, a.neg_path};
    if (have_unlabeled) {
        config << " --unlabeled " << a.unlabeled_path;
        inputs.push_back(a.unlabeled_path);
    }
    config << " --method " << a.method << " --labels " << a.labels;
    if (opt.method == TrainMethod::Svm)
        config << " --svm-lambda " << format_double(a.svm_lambda) << " --svm-iters "
               << a.svm_iters << " --seed " << a.seed;
    if (a.with_vertical) config << " --with-vertical";
    config << " --out " << a.out_path;
    clf.provenance = provenance(config.str(), inputs);

    write_svg(a.out_path, clf, pos, neg);
    const std::string report = training_report(clf);
    std::cout << report;
    if (!a.report_path.empty()) {
        std::string full;
        for (const auto& l : comment_block(clf.provenance)) full += l + "\n";
        write_text_file(a.report_path, full + report);
    }
    std::cout << "wrote classifier to " << a.out_path << "\n";
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
    std::string features_path, in_path, classifier_path, pipeline_path;
    std::string out_path, cores_out;
    double threshold = 0.5;
    double core_dmin = 0;
    unsigned workers = 0;
};

void run_classify(const ClassifyArgs& a) {
    if (a.classifier_path.empty() == a.pipeline_path.empty())
        throw UsageError("classify needs exactly one of --classifier or --pipeline");
    if (a.features_path.empty() == a.in_path.empty())
        throw UsageError("classify needs exactly one of --features or --in");

    Pipeline pipeline;
    if (!a.pipeline_path.empty()) {
        pipeline = load_pipeline(a.pipeline_path);
    } else {
        PipelineStage stage;
        stage.classifier = read_svg(a.classifier_path);
        stage.positive_label = stage.classifier.label_pos;
        stage.negative_label = stage.classifier.label_neg;
        stage.threshold = a.threshold;
        pipeline.stages.push_back(std::move(stage));
        pipeline.validate();
    }
    const ScaleSet& scales = pipeline.stages[0].classifier.scales;

    // features come from a feature file or are computed from the scene
    FeatureSet fs;
    PointCloud scene;
    bool have_scene = false;
    if (!a.features_path.empty()) {
        fs = read_featureset(a.features_path);
    } else {
        scene = load_xyz(a.in_path);
        have_scene = true;
        const SpatialIndex index(scene);
        FeaturesArgs fa;
        fa.core_dmin = a.core_dmin;
        const CorePointSet cores = select_cores(scene, fa);
        fs = compute_features_batch(index, cores, scales, a.workers);
        fs.source = a.in_path;
    }

    const MulticlassResult result = run_cascade(pipeline, fs, a.workers);

    std::ostringstream config;
    config << "classify";
    std::vector<std::string> inputs;
    if (!a.features_path.empty()) {
        config << " --features " << a.features_path;
        inputs.push_back(a.features_path);
    } else {
        config << " --in " << a.in_path;
        if (a.core_dmin > 0) config << " --core-dmin " << format_double(a.core_dmin);
        inputs.push_back(a.in_path);
    }
    if (!a.pipeline_path.empty()) {
        config << " --pipeline " << a.pipeline_path;
        inputs.push_back(a.pipeline_path);
    } else {
        config << " --classifier " << a.classifier_path << " --threshold "
               << format_double(a.threshold);
        inputs.push_back(a.classifier_path);
    }
    config << " --out " << a.out_path;
    const auto prov = provenance(config.str(), inputs);

    std::vector<std::string> core_labels(result.rows.size());
    for (size_t i = 0; i < result.rows.size(); ++i) core_labels[i] = result.rows[i].label;

    if (have_scene) {
        const SpatialIndex core_index(fs.cores.data(), fs.cores.size());
        const auto scene_labels = propagate_to_scene(core_labels, core_index, scene, a.workers);
        save_xyz(a.out_path, scene, comment_block(prov), &scene_labels);
    } else {
        PointCloud cores_cloud;
        cores_cloud.points = fs.cores;
        save_xyz(a.out_path, cores_cloud, comment_block(prov), &core_labels);
    }

    // per-core decision table: label, deciding stage, per-stage confidences
    if (!a.cores_out.empty()) {
        std::ostringstream table;
        for (const auto& l : comment_block(prov)) table << l << '\n';
        table << "# columns: x y z label stage";
        for (size_t s = 0; s < pipeline.stages.size(); ++s) table << " conf" << s;
        table << '\n';
        for (size_t i = 0; i < result.rows.size(); ++i) {
            const PointDecision& dec = result.rows[i];
            const Point3& c = fs.cores[i];
            table << format_double(c.x) << ' ' << format_double(c.y) << ' '
                  << format_double(c.z) << ' ' << dec.label << ' ' << dec.stage_decided;
            for (size_t s = 0; s < pipeline.stages.size(); ++s) {
                if (s < dec.confidences.size())
                    table << ' ' << format_double(dec.confidences[s]);
                else
                    table << " -";
            }
            table << '\n';
        }
        write_text_file(a.cores_out, table.str());
    }

    const size_t unlabeled = result.unlabeled_count();
    std::cout << "classified " << result.rows.size() << " core points, " << unlabeled
              << " unlabeled (" << format_double(100.0 * static_cast<double>(unlabeled) /
                                                 std::max<size_t>(1, result.rows.size()))
              << "%)\n";
    std::cout << "wrote " << a.out_path << "\n";
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
    std::string pred_path, truth_path, report_path;
};

void run_validate(const ValidateArgs& a) {
    std::vector<std::string> pred_labels, truth_labels;
    const PointCloud pred = load_xyz_labeled(a.pred_path, pred_labels);
    const PointCloud truth = load_xyz_labeled(a.truth_path, truth_labels);
    if (pred.size() != truth.size())
        throw DataError("prediction and truth have different point counts (" +
                        std::to_string(pred.size()) + " vs " + std::to_string(truth.size()) + ")");

    LabelConfusion all, labeled_only;
    for (size_t i = 0; i < pred.size(); ++i) {
        if (truth_labels[i].empty())
            throw DataError(a.truth_path + ": point " + std::to_string(i) + " has no label");
        const std::string& p = pred_labels[i].empty() ? std::string(kUnlabeled) : pred_labels[i];
        all.add(truth_labels[i], p);
        if (p != kUnlabeled) labeled_only.add(truth_labels[i], p);
    }

    std::ostringstream report;
    for (const auto& l :
         comment_block(provenance("validate --pred " + a.pred_path + " --truth " + a.truth_path,
                                  {a.pred_path, a.truth_path})))
        report << l << '\n';
    report << all.report();
    if (all.counts != labeled_only.counts) {
        report << "\nignoring unlabeled points:\n";
        report << labeled_only.report();
    }
    std::cout << report.str();
    if (!a.report_path.empty()) write_text_file(a.report_path, report.str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-scale dimensionality classification of 3D point clouds"};
    app.set_version_flag("--version", tool_line());
    app.require_subcommand(1);

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "generate a labeled synthetic scene");
    synth_cmd->add_option("--spec", synth_args.spec_path, "scene spec file")->required();
    synth_cmd->add_option("--out", synth_args.out_path, "output XYZ+label file")->required();

    FeaturesArgs feat_args;
    auto* feat_cmd =
        app.add_subcommand("features", "compute multi-scale features at core points");
    feat_cmd->add_option("--in", feat_args.in_path, "scene XYZ file")->required();
    feat_cmd->add_option("--scales", feat_args.scales_spec,
                         "min:step:max or comma list of ball diameters (m)")
        ->required();
    feat_cmd->add_option("--core-dmin", feat_args.core_dmin,
                         "min-distance subsampling for core points (m)");
    feat_cmd->add_option("--cores", feat_args.cores_path, "explicit core points XYZ file");
    feat_cmd->add_option("--out", feat_args.out_path, "output feature set file")->required();
    feat_cmd->add_option("--workers", feat_args.workers, "worker threads (0 = auto)");

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "train a binary classifier");
    train_cmd->add_option("--pos", train_args.pos_path, "positive-class feature set")->required();
    train_cmd->add_option("--neg", train_args.neg_path, "negative-class feature set")->required();
    train_cmd->add_option("--unlabeled", train_args.unlabeled_path,
                          "unlabeled feature set for the semi-supervised boundary");
    train_cmd->add_option("--method", train_args.method, "lda or svm");
    train_cmd->add_option("--labels", train_args.labels, "POS,NEG class names");
    train_cmd->add_option("--svm-lambda", train_args.svm_lambda, "svm regularization");
    train_cmd->add_option("--svm-iters", train_args.svm_iters, "svm iterations");
    train_cmd->add_option("--seed", train_args.seed, "svm sampling seed");
    train_cmd->add_flag("--with-vertical", train_args.with_vertical,
                        "append the vertical angle to the feature vector");
    train_cmd->add_option("--out", train_args.out_path, "output classifier SVG")->required();
    train_cmd->add_option("--report", train_args.report_path, "training report file");

    ClassifyArgs cls_args;
    auto* cls_cmd = app.add_subcommand("classify", "label a scene or feature set");
    cls_cmd->add_option("--features", cls_args.features_path, "precomputed feature set");
    cls_cmd->add_option("--in", cls_args.in_path, "scene XYZ file (features computed here)");
    cls_cmd->add_option("--core-dmin", cls_args.core_dmin, "core subsampling for --in (m)");
    cls_cmd->add_option("--classifier", cls_args.classifier_path, "single classifier SVG");
    cls_cmd->add_option("--threshold", cls_args.threshold,
                        "confidence threshold for --classifier");
    cls_cmd->add_option("--pipeline", cls_args.pipeline_path, "cascade pipeline config");
    cls_cmd->add_option("--out", cls_args.out_path, "labeled output cloud")->required();
    cls_cmd->add_option("--cores-out", cls_args.cores_out, "per-core decision table");
    cls_cmd->add_option("--workers", cls_args.workers, "worker threads (0 = auto)");

    ValidateArgs val_args;
    auto* val_cmd = app.add_subcommand("validate", "compare predictions with ground truth");
    val_cmd->add_option("--pred", val_args.pred_path, "labeled predictions")->required();
    val_cmd->add_option("--truth", val_args.truth_path, "ground-truth labels")->required();
    val_cmd->add_option("--report", val_args.report_path, "metrics report file");

    try {
        app.parse(argc, argv);
        if (*synth_cmd) run_synth(synth_args);
        if (*feat_cmd) run_features(feat_args);
        if (*train_cmd) run_train(train_args);
        if (*cls_cmd) run_classify(cls_args);
        if (*val_cmd) run_validate(val_args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
