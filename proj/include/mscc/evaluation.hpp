#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mscc {

// Binary confusion counts, named after the usual vegetation/ground roles:
// tv/fv are true/false positives, tg/fg true/false negatives.
struct ConfusionCounts {
    long tv = 0, tg = 0, fv = 0, fg = 0;

    long total() const { return tv + tg + fv + fg; }
};

// ba = (a_v + a_g) / 2 with a_v = tv/(tv+fg), a_g = tg/(tg+fv).
// 0.5 indicates chance-level assignment.
double balanced_accuracy(const ConfusionCounts& c);

// fdr = (mu2 - mu1)^2 / (v1 + v2) over signed distances, with unbiased
// (n-1) sample variances. Zero summed variance with distinct means yields
// +infinity.
double fisher_discriminant_ratio(const std::vector<double>& d_pos,
                                 const std::vector<double>& d_neg);

// Disjoint, exhaustive, per-class stratified, seed-deterministic split of
// sample indices. `labels[i]` names the class of sample i.
struct TrainTestSplit {
    std::vector<size_t> train;
    std::vector<size_t> test;
};
TrainTestSplit split_train_test(const std::vector<std::string>& labels, double fraction,
                                uint64_t seed);

// k-class tally for reports; keys are (truth, predicted).
struct LabelConfusion {
    std::map<std::pair<std::string, std::string>, long> counts;
    void add(const std::string& truth, const std::string& predicted);
    std::vector<std::string> classes() const; // sorted truth labels
    double recall(const std::string& cls) const;
    double mean_recall() const; // k-class balanced accuracy
    std::string report() const;
};

} // namespace mscc
