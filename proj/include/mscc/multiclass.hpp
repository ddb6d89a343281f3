#pragma once

#include "mscc/classifier.hpp"
#include "mscc/msdim.hpp"
#include "mscc/pointcloud.hpp"
#include "mscc/spatial_index.hpp"

#include <string>
#include <vector>

namespace mscc {

inline constexpr const char* kUnlabeled = "unlabeled";

// One cascade step: the positive side is terminal (positive_label), the
// negative side either falls through to the next stage or takes a terminal
// label. Confidence below the threshold stops the walk as "unlabeled".
struct PipelineStage {
    BinaryClassifier classifier;
    std::string positive_label;
    std::string negative_label; // empty: route to the next stage
    double threshold = 0.5;     // in [0.5, 1)
};

struct Pipeline {
    std::vector<PipelineStage> stages;

    // throws UsageError when a stage threshold is out of range or the last
    // stage has no terminal negative label
    void validate() const;
};

// Text config, one "stage" line per classifier, in cascade order:
//   stage <classifier.svg> negative=<next|LABEL> threshold=<t> [positive=<LABEL>]
// Classifier paths are resolved relative to the config file.
Pipeline load_pipeline(const std::string& path);

struct PointDecision {
    std::string label;               // kUnlabeled when the walk stopped
    int stage_decided = -1;          // stage index, -1 for unusable features
    std::vector<double> confidences; // one entry per visited stage
};

struct MulticlassResult {
    std::vector<PointDecision> rows;

    size_t unlabeled_count() const;
};

// Walks every feature through the cascade. Rows are independent; the result
// does not depend on the worker count.
MulticlassResult run_cascade(const Pipeline& pipeline, const FeatureSet& features,
                             unsigned workers = 0);

// One-vs-one voting. `labels` of each classifier are its label_pos /
// label_neg. The label with strictly the most votes wins; ties yield
// kUnlabeled. Throws UsageError when a pair is missing for the declared
// class set.
struct VoteSet {
    std::vector<BinaryClassifier> classifiers;
    std::vector<std::string> classes; // k classes; k(k-1)/2 classifiers required

    void validate() const;
};

std::string majority_vote(const VoteSet& votes, const DimFeature& feature);

// Each scene point inherits the label of its nearest core point.
std::vector<std::string> propagate_to_scene(const std::vector<std::string>& core_labels,
                                            const SpatialIndex& core_index,
                                            const PointCloud& scene, unsigned workers = 0);

} // namespace mscc
