#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "radpipe/gbdt.hpp"
#include "radpipe/volume.hpp"

namespace radpipe {

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;
};

struct ClassificationMetrics {
    ConfusionCounts counts;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    // Set when the respective denominator (tp+fp / tp+fn) was zero and the
    // metric was pinned to 0 by convention.
    bool precision_degenerate = false;
    bool recall_degenerate = false;
};

ClassificationMetrics confusion_metrics(const std::vector<int>& pred,
                                        const std::vector<int>& truth);

// dice = 2|A∩B| / (|A| + |B|); both masks empty -> 1 by convention.
double dice(const Mask& a, const Mask& b);

// Mean of foreground IoU and background IoU.
double miou(const Mask& a, const Mask& b);

struct FoldAssignment {
    int k = 0;
    std::map<std::string, int> fold_of;  // case_id -> fold in [0, k)
};

// Within each class: case_ids sorted, deterministically shuffled by the
// seeded generator, dealt round-robin. Per-class fold sizes differ by at
// most 1. StratificationError when a class has fewer than k members.
FoldAssignment stratified_kfold(const std::vector<std::pair<std::string, int>>& labels, int k,
                                std::uint64_t seed);

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;  // population (divisor = number of folds)
};

Aggregate aggregate(const std::vector<double>& per_fold);

struct MetricSummary {
    // Per fold {accuracy, precision, recall}, in percent, fold order.
    std::vector<std::array<double, 3>> per_fold;
    std::array<double, 3> mean{};
    std::array<double, 3> stddev{};
};

// Stratified k-fold cross-validation of a GBDT with the given params: train
// on k-1 folds, evaluate on the held-out fold, aggregate across folds.
MetricSummary cross_validate(const std::vector<CaseRecord>& data, const GbdtHyperParams& hp,
                             int k, std::uint64_t seed);

// Rounding used for reported values: 2 decimals, percent scale.
double round2(double value);

}  // namespace radpipe
