#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radpipe/feature_vector.hpp"

namespace radpipe {

struct GbdtHyperParams {
    int n_estimators = 3;
    int max_depth = 2;
    double learning_rate = 0.3;
    double l2_lambda = 1.0;
    double gamma_min_gain = 0.0;
    double min_child_weight = 1.0;
    double base_score = 0.5;

    void validate() const;
};

// Nodes are stored pre-order; feature < 0 marks a leaf. Routing: feature
// value < threshold goes left. A tree with no nodes contributes 0 to every
// margin (a root whose best split has no positive gain is not emitted).
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double weight = 0.0;
};

struct Tree {
    std::vector<TreeNode> nodes;

    double output(const std::vector<double>& x) const;
};

struct GbdtModel {
    double base_score = 0.5;
    double learning_rate = 0.3;
    std::vector<std::string> feature_names;
    std::vector<Tree> trees;
};

// Second-order boosting on logistic loss with exact greedy split search.
// Deterministic: identical data and params give an identical model.
// DegenerateLabelsError when only one class is present.
GbdtModel train(const std::vector<CaseRecord>& data, const GbdtHyperParams& hp);

// sigmoid(logit(base_score) + learning_rate * sum of tree outputs);
// SchemaError when x does not carry the model's feature schema.
double predict_proba(const GbdtModel& m, const FeatureVector& x);

inline int predict_label(double probability) { return probability >= 0.5 ? 1 : 0; }

// Versioned JSON round-trip: {version, base_score, learning_rate,
// feature_names, trees:[{nodes:[...]}]} with nodes in pre-order.
void save_model(const GbdtModel& m, const std::string& path);
GbdtModel load_model(const std::string& path);

struct GridSearchEntry {
    GbdtHyperParams hp;
    double mean_accuracy = 0.0;  // stratified k-fold CV accuracy, percent
};

struct GridSearchResult {
    GbdtHyperParams best;
    std::vector<GridSearchEntry> table;
};

// Best = argmax CV accuracy; ties broken by fewer estimators, then smaller
// depth, then grid order.
GridSearchResult grid_search(const std::vector<CaseRecord>& data,
                             const std::vector<GbdtHyperParams>& grid, int k,
                             std::uint64_t seed);

// estimators {1,2,3,5,10} x depth {1,2,3,4} x learning rate {0.1,0.3}.
std::vector<GbdtHyperParams> default_grid();

}  // namespace radpipe
