#include "radpipe/eval.hpp"

#include <algorithm>
#include <cmath>

#include "radpipe/error.hpp"
#include "radpipe/rng.hpp"

namespace radpipe {

ClassificationMetrics confusion_metrics(const std::vector<int>& pred,
                                        const std::vector<int>& truth) {
    if (pred.size() != truth.size())
        throw RangeError("confusion_metrics: prediction/truth length mismatch");
    if (pred.empty()) throw RangeError("confusion_metrics: empty input");

    ClassificationMetrics m;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] != 0 && pred[i] != 1)
            throw RangeError("confusion_metrics: prediction labels must be 0 or 1");
        if (truth[i] != 0 && truth[i] != 1)
            throw RangeError("confusion_metrics: truth labels must be 0 or 1");
        if (pred[i] == 1 && truth[i] == 1)
            ++m.counts.tp;
        else if (pred[i] == 1)
            ++m.counts.fp;
        else if (truth[i] == 1)
            ++m.counts.fn;
        else
            ++m.counts.tn;
    }
    const double n = static_cast<double>(pred.size());
    m.accuracy = static_cast<double>(m.counts.tp + m.counts.tn) / n;
    if (m.counts.tp + m.counts.fp > 0)
        m.precision =
            static_cast<double>(m.counts.tp) / static_cast<double>(m.counts.tp + m.counts.fp);
    else
        m.precision_degenerate = true;
    if (m.counts.tp + m.counts.fn > 0)
        m.recall =
            static_cast<double>(m.counts.tp) / static_cast<double>(m.counts.tp + m.counts.fn);
    else
        m.recall_degenerate = true;
    return m;
}

namespace {

struct OverlapCounts {
    double both = 0.0;
    double a_only = 0.0;
    double b_only = 0.0;
    double neither = 0.0;
};

OverlapCounts overlap(const Mask& a, const Mask& b) {
    check_aligned(a.grid, b.grid);
    OverlapCounts c;
    for (std::size_t i = 0; i < a.voxels.size(); ++i) {
        const bool va = a.voxels[i] != 0, vb = b.voxels[i] != 0;
        if (va && vb)
            c.both += 1.0;
        else if (va)
            c.a_only += 1.0;
        else if (vb)
            c.b_only += 1.0;
        else
            c.neither += 1.0;
    }
    return c;
}

}  // namespace

double dice(const Mask& a, const Mask& b) {
    const OverlapCounts c = overlap(a, b);
    const double denom = 2.0 * c.both + c.a_only + c.b_only;
    if (denom == 0.0) return 1.0;  // both masks empty
    return 2.0 * c.both / denom;
}

double miou(const Mask& a, const Mask& b) {
    const OverlapCounts c = overlap(a, b);
    const double fg_union = c.both + c.a_only + c.b_only;
    const double fg_iou = fg_union == 0.0 ? 1.0 : c.both / fg_union;
    const double bg_union = c.neither + c.a_only + c.b_only;
    const double bg_iou = bg_union == 0.0 ? 1.0 : c.neither / bg_union;
    return 0.5 * (fg_iou + bg_iou);
}

FoldAssignment stratified_kfold(const std::vector<std::pair<std::string, int>>& labels, int k,
                                std::uint64_t seed) {
    if (k < 2) throw RangeError("stratified_kfold: k must be >= 2");

    FoldAssignment assignment;
    assignment.k = k;
    for (int cls : {0, 1}) {
        std::vector<std::string> ids;
        for (const auto& [id, label] : labels)
            if (label == cls) ids.push_back(id);
        if (ids.empty()) continue;
        if (ids.size() < static_cast<std::size_t>(k))
            throw StratificationError("class " + std::to_string(cls) + " has " +
                                      std::to_string(ids.size()) + " members, fewer than k=" +
                                      std::to_string(k));
        std::sort(ids.begin(), ids.end());
        SplitMix64 gen(hash64(seed, static_cast<std::uint64_t>(cls)));
        deterministic_shuffle(ids, gen);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (!assignment.fold_of.emplace(ids[i], static_cast<int>(i % k)).second)
                throw StratificationError("duplicate case_id " + ids[i]);
        }
    }
    if (assignment.fold_of.size() != labels.size())
        throw StratificationError("labels must be 0 or 1 with unique case_ids");
    return assignment;
}

Aggregate aggregate(const std::vector<double>& per_fold) {
    if (per_fold.empty()) throw RangeError("aggregate: empty fold list");
    Aggregate a;
    for (double v : per_fold) a.mean += v;
    a.mean /= static_cast<double>(per_fold.size());
    double ss = 0.0;
    for (double v : per_fold) ss += (v - a.mean) * (v - a.mean);
    a.stddev = std::sqrt(ss / static_cast<double>(per_fold.size()));
    return a;
}

MetricSummary cross_validate(const std::vector<CaseRecord>& data, const GbdtHyperParams& hp,
                             int k, std::uint64_t seed) {
    std::vector<std::pair<std::string, int>> labels;
    labels.reserve(data.size());
    for (const auto& r : data) labels.emplace_back(r.case_id, r.label);
    const FoldAssignment folds = stratified_kfold(labels, k, seed);

    MetricSummary summary;
    for (int fold = 0; fold < k; ++fold) {
        std::vector<CaseRecord> train_set;
        std::vector<const CaseRecord*> test_set;
        for (const auto& r : data) {
            if (folds.fold_of.at(r.case_id) == fold)
                test_set.push_back(&r);
            else
                train_set.push_back(r);
        }
        const GbdtModel model = train(train_set, hp);
        std::vector<int> pred, truth;
        for (const CaseRecord* r : test_set) {
            pred.push_back(predict_label(predict_proba(model, *r->features)));
            truth.push_back(r->label);
        }
        const ClassificationMetrics m = confusion_metrics(pred, truth);
        summary.per_fold.push_back(
            {100.0 * m.accuracy, 100.0 * m.precision, 100.0 * m.recall});
    }

    for (int metric = 0; metric < 3; ++metric) {
        std::vector<double> values;
        for (const auto& fold : summary.per_fold)
            values.push_back(fold[static_cast<std::size_t>(metric)]);
        const Aggregate a = aggregate(values);
        summary.mean[static_cast<std::size_t>(metric)] = a.mean;
        summary.stddev[static_cast<std::size_t>(metric)] = a.stddev;
    }
    return summary;
}

double round2(double value) { return std::round(value * 100.0) / 100.0; }

}  // namespace radpipe
