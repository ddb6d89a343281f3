#include "mscc/evaluation.hpp"

#include "mscc/errors.hpp"
#include "mscc/rng.hpp"
#include "mscc/textio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace mscc {

double balanced_accuracy(const ConfusionCounts& c) {
    if (c.tv + c.fg <= 0 || c.tg + c.fv <= 0)
        throw NumericError("balanced_accuracy: a ground-truth class is empty");
    const double av = static_cast<double>(c.tv) / static_cast<double>(c.tv + c.fg);
    const double ag = static_cast<double>(c.tg) / static_cast<double>(c.tg + c.fv);
    return 0.5 * (av + ag);
}

namespace {
// mean and unbiased variance
std::pair<double, double> mean_var(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double mean = 0;
    for (double x : v) mean += x;
    mean /= n;
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= (n - 1);
    return {mean, var};
}
} // namespace

double fisher_discriminant_ratio(const std::vector<double>& d_pos,
                                 const std::vector<double>& d_neg) {
    if (d_pos.size() < 2 || d_neg.size() < 2)
        throw NumericError("fisher_discriminant_ratio: each class needs at least 2 samples");
    const auto [m1, v1] = mean_var(d_neg);
    const auto [m2, v2] = mean_var(d_pos);
    const double diff = m2 - m1;
    if (v1 + v2 <= 0) {
        if (diff == 0) return 0;
        return std::numeric_limits<double>::infinity();
    }
    return diff * diff / (v1 + v2);
}

TrainTestSplit split_train_test(const std::vector<std::string>& labels, double fraction,
                                uint64_t seed) {
    if (!(fraction > 0 && fraction < 1))
        throw UsageError("split fraction must be in (0, 1)");
    std::map<std::string, std::vector<size_t>> by_class;
    for (size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

    TrainTestSplit out;
    Rng rng(seed);
    for (auto& [cls, idx] : by_class) {
        const size_t n_train = static_cast<size_t>(std::lround(fraction * static_cast<double>(idx.size())));
        if (n_train == 0 || n_train == idx.size())
            throw DataError("class '" + cls + "' is too small to split (" +
                            std::to_string(idx.size()) + " samples)");
        rng.shuffle(idx);
        out.train.insert(out.train.end(), idx.begin(), idx.begin() + n_train);
        out.test.insert(out.test.end(), idx.begin() + n_train, idx.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

void LabelConfusion::add(const std::string& truth, const std::string& predicted) {
    ++counts[{truth, predicted}];
}

std::vector<std::string> LabelConfusion::classes() const {
    std::set<std::string> s;
    for (const auto& [key, n] : counts) s.insert(key.first);
    return {s.begin(), s.end()};
}

double LabelConfusion::recall(const std::string& cls) const {
    long correct = 0, total = 0;
    for (const auto& [key, n] : counts) {
        if (key.first != cls) continue;
        total += n;
        if (key.second == cls) correct += n;
    }
    if (total == 0) throw NumericError("recall: class '" + cls + "' absent from ground truth");
    return static_cast<double>(correct) / static_cast<double>(total);
}

double LabelConfusion::mean_recall() const {
    const auto cls = classes();
    if (cls.empty()) throw NumericError("mean_recall: empty confusion");
    double sum = 0;
    for (const auto& c : cls) sum += recall(c);
    return sum / static_cast<double>(cls.size());
}

std::string LabelConfusion::report() const {
    std::ostringstream out;
    const auto cls = classes();
    out << "confusion (rows = truth, columns = predicted):\n";
    std::set<std::string> pred_set;
    for (const auto& [key, n] : counts) pred_set.insert(key.second);
    std::vector<std::string> preds(pred_set.begin(), pred_set.end());
    out << "truth\\pred";
    for (const auto& p : preds) out << '\t' << p;
    out << '\n';
    for (const auto& t : cls) {
        out << t;
        for (const auto& p : preds) {
            auto it = counts.find({t, p});
            out << '\t' << (it == counts.end() ? 0 : it->second);
        }
        out << '\n';
    }
    for (const auto& c : cls)
        out << "accuracy " << c << ": " << format_double(recall(c)) << '\n';
    out << "balanced accuracy: " << format_double(mean_recall()) << '\n';
    return out.str();
}

} // namespace mscc
