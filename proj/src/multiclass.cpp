#include "mscc/multiclass.hpp"

#include "mscc/classifier_svg.hpp"
#include "mscc/errors.hpp"
#include "mscc/parallel.hpp"
#include "mscc/textio.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

namespace mscc {

void Pipeline::validate() const {
    if (stages.empty()) throw UsageError("pipeline has no stages");
    for (size_t i = 0; i < stages.size(); ++i) {
        const PipelineStage& s = stages[i];
        if (!(s.threshold >= 0.5 && s.threshold < 1.0))
            throw UsageError("stage " + std::to_string(i) +
                             ": threshold must be in [0.5, 1)");
        if (s.positive_label.empty())
            throw UsageError("stage " + std::to_string(i) + ": empty positive label");
        if (i + 1 == stages.size() && s.negative_label.empty())
            throw UsageError("last stage must route its negative side to a terminal label");
    }
    for (size_t i = 1; i < stages.size(); ++i)
        if (!(stages[i].classifier.scales == stages[0].classifier.scales))
            throw UsageError("stage " + std::to_string(i) +
                             ": scale list differs from stage 0");
}

Pipeline load_pipeline(const std::string& path) {
    const std::string content = read_text_file(path);
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    Pipeline p;
    std::istringstream in(content);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tokens = split_ws(line);
        if (tokens.empty() || tokens[0][0] == '#') continue;
        if (tokens[0] != "stage")
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": expected 'stage', got '" + tokens[0] + "'");
        if (tokens.size() < 2)
            throw DataError(path + ":" + std::to_string(lineno) + ": missing classifier path");
        PipelineStage stage;
        std::filesystem::path cpath(tokens[1]);
        if (cpath.is_relative()) cpath = base / cpath;
        stage.classifier = read_svg(cpath.string());
        stage.positive_label = stage.classifier.label_pos;
        bool have_threshold = false, have_negative = false;
        for (size_t t = 2; t < tokens.size(); ++t) {
            const size_t eq = tokens[t].find('=');
            if (eq == std::string::npos)
                throw DataError(path + ":" + std::to_string(lineno) + ": expected key=value, got '" +
                                tokens[t] + "'");
            const std::string key = tokens[t].substr(0, eq);
            const std::string value = tokens[t].substr(eq + 1);
            if (key == "positive") {
                stage.positive_label = value;
            } else if (key == "negative") {
                stage.negative_label = value == "next" ? "" : value;
                have_negative = true;
            } else if (key == "threshold") {
                stage.threshold = parse_double(value, path + " threshold");
                have_threshold = true;
            } else {
                throw DataError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
            }
        }
        if (!have_negative)
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": stage needs negative=<next|LABEL>");
        if (!have_threshold) stage.threshold = 0.5;
        p.stages.push_back(std::move(stage));
    }
    p.validate();
    return p;
}

size_t MulticlassResult::unlabeled_count() const {
    size_t n = 0;
    for (const auto& r : rows)
        if (r.label == kUnlabeled) ++n;
    return n;
}

MulticlassResult run_cascade(const Pipeline& pipeline, const FeatureSet& features,
                             unsigned workers) {
    pipeline.validate();
    for (const auto& s : pipeline.stages) s.classifier.check_compatible(features);

    MulticlassResult result;
    result.rows.resize(features.size());
    parallel_for(features.size(), workers, [&](size_t i) {
        PointDecision& dec = result.rows[i];
        const DimFeature& f = features.rows[i];
        if (!f.usable) {
            dec.label = kUnlabeled;
            dec.stage_decided = -1;
            return;
        }
        for (size_t s = 0; s < pipeline.stages.size(); ++s) {
            const PipelineStage& stage = pipeline.stages[s];
            const Classification c = stage.classifier.classify(f);
            dec.confidences.push_back(c.confidence);
            if (c.confidence < stage.threshold) {
                dec.label = kUnlabeled;
                dec.stage_decided = static_cast<int>(s);
                return;
            }
            if (c.label > 0) {
                dec.label = stage.positive_label;
                dec.stage_decided = static_cast<int>(s);
                return;
            }
            if (!stage.negative_label.empty()) {
                dec.label = stage.negative_label;
                dec.stage_decided = static_cast<int>(s);
                return;
            }
        }
        // walked off the cascade: validate() guarantees a terminal label,
        // so this is unreachable
        dec.label = kUnlabeled;
        dec.stage_decided = static_cast<int>(pipeline.stages.size()) - 1;
    });
    return result;
}

void VoteSet::validate() const {
    if (classes.size() < 2) throw UsageError("majority vote needs at least 2 classes");
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& c : classifiers) {
        auto key = std::minmax(c.label_pos, c.label_neg);
        pairs.insert({key.first, key.second});
    }
    for (size_t i = 0; i < classes.size(); ++i)
        for (size_t j = i + 1; j < classes.size(); ++j) {
            auto key = std::minmax(classes[i], classes[j]);
            if (!pairs.count({key.first, key.second}))
                throw UsageError("majority vote: missing classifier for pair " + classes[i] +
                                 " / " + classes[j]);
        }
}

std::string majority_vote(const VoteSet& votes, const DimFeature& feature) {
    votes.validate();
    if (!feature.usable) return kUnlabeled;
    std::map<std::string, int> tally;
    for (const auto& cls : votes.classes) tally[cls] = 0;
    for (const auto& c : votes.classifiers) {
        const Classification r = c.classify(feature);
        ++tally[r.label > 0 ? c.label_pos : c.label_neg];
    }
    int best = -1, second = -1;
    std::string winner;
    for (const auto& [label, count] : tally) {
        if (count > best) {
            second = best;
            best = count;
            winner = label;
        } else if (count > second) {
            second = count;
        }
    }
    if (best == second) return kUnlabeled; // tie
    return winner;
}

std::vector<std::string> propagate_to_scene(const std::vector<std::string>& core_labels,
                                            const SpatialIndex& core_index,
                                            const PointCloud& scene, unsigned workers) {
    if (core_labels.size() != core_index.size())
        throw UsageError("propagate_to_scene: label count does not match core index size");
    std::vector<std::string> out(scene.size());
    parallel_for(scene.size(), workers, [&](size_t i) {
        out[i] = core_labels[core_index.nearest(scene[i])];
    });
    return out;
}

} // namespace mscc
