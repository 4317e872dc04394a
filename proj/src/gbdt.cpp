#include "radpipe/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "radpipe/error.hpp"
#include "radpipe/eval.hpp"

namespace radpipe {

namespace {

constexpr int kModelVersion = 1;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

struct SplitCandidate {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

class TreeBuilder {
  public:
    TreeBuilder(const std::vector<std::vector<double>>& x, const std::vector<double>& g,
                const std::vector<double>& h, const GbdtHyperParams& hp)
        : x_(x), g_(g), h_(h), hp_(hp) {}

    // Returns an empty tree when the root has no positive-gain split.
    Tree build() {
        Tree tree;
        std::vector<std::size_t> all(x_.size());
        std::iota(all.begin(), all.end(), 0);
        if (!find_split(all).found) return tree;
        grow(tree, all, 0);
        return tree;
    }

  private:
    double leaf_weight(const std::vector<std::size_t>& samples) const {
        double g_sum = 0.0, h_sum = 0.0;
        for (std::size_t s : samples) {
            g_sum += g_[s];
            h_sum += h_[s];
        }
        return -g_sum / (h_sum + hp_.l2_lambda);
    }

    SplitCandidate find_split(const std::vector<std::size_t>& samples) const {
        const std::size_t n_features = x_.front().size();
        double g_total = 0.0, h_total = 0.0;
        for (std::size_t s : samples) {
            g_total += g_[s];
            h_total += h_[s];
        }
        const double parent_score = g_total * g_total / (h_total + hp_.l2_lambda);

        SplitCandidate best;
        std::vector<std::pair<double, std::size_t>> order;
        for (std::size_t f = 0; f < n_features; ++f) {
            order.clear();
            for (std::size_t s : samples) order.emplace_back(x_[s][f], s);
            std::sort(order.begin(), order.end());

            double g_left = 0.0, h_left = 0.0;
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                g_left += g_[order[i].second];
                h_left += h_[order[i].second];
                const double lo = order[i].first, hi = order[i + 1].first;
                if (lo == hi) continue;
                const double threshold = 0.5 * (lo + hi);
                // Guard against the midpoint rounding onto the lower value,
                // which would not reproduce this partition at predict time.
                if (threshold <= lo) continue;
                const double g_right = g_total - g_left;
                const double h_right = h_total - h_left;
                if (h_left < hp_.min_child_weight || h_right < hp_.min_child_weight) continue;
                const double gain =
                    0.5 * (g_left * g_left / (h_left + hp_.l2_lambda) +
                           g_right * g_right / (h_right + hp_.l2_lambda) - parent_score) -
                    hp_.gamma_min_gain;
                if (gain <= 0.0 || gain <= best.gain) continue;
                // Strict improvement required: scanning features and
                // thresholds in ascending order breaks ties toward the lowest
                // feature index, then the lowest threshold.
                best.found = true;
                best.feature = static_cast<int>(f);
                best.threshold = threshold;
                best.gain = gain;
            }
        }
        return best;
    }

    std::int32_t grow(Tree& tree, const std::vector<std::size_t>& samples, int depth) {
        const auto index = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();

        SplitCandidate split;
        if (depth < hp_.max_depth) split = find_split(samples);
        if (!split.found) {
            tree.nodes[index].weight = leaf_weight(samples);
            return index;
        }

        std::vector<std::size_t> left, right;
        for (std::size_t s : samples)
            (x_[s][static_cast<std::size_t>(split.feature)] < split.threshold ? left : right)
                .push_back(s);

        tree.nodes[index].feature = split.feature;
        tree.nodes[index].threshold = split.threshold;
        tree.nodes[index].left = grow(tree, left, depth + 1);
        tree.nodes[index].right = grow(tree, right, depth + 1);
        return index;
    }

    const std::vector<std::vector<double>>& x_;
    const std::vector<double>& g_;
    const std::vector<double>& h_;
    const GbdtHyperParams& hp_;
};

}  // namespace

void GbdtHyperParams::validate() const {
    if (n_estimators < 1) throw RangeError("n_estimators must be >= 1");
    if (max_depth < 1) throw RangeError("max_depth must be >= 1");
    if (learning_rate <= 0.0 || learning_rate > 1.0)
        throw RangeError("learning_rate must be in (0, 1]");
    if (l2_lambda < 0.0) throw RangeError("l2_lambda must be >= 0");
    if (gamma_min_gain < 0.0) throw RangeError("gamma_min_gain must be >= 0");
    if (min_child_weight < 0.0) throw RangeError("min_child_weight must be >= 0");
    if (base_score <= 0.0 || base_score >= 1.0) throw RangeError("base_score must be in (0, 1)");
}

double Tree::output(const std::vector<double>& x) const {
    if (nodes.empty()) return 0.0;
    std::int32_t i = 0;
    while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
        const TreeNode& n = nodes[static_cast<std::size_t>(i)];
        i = x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(i)].weight;
}

GbdtModel train(const std::vector<CaseRecord>& data, const GbdtHyperParams& hp) {
    hp.validate();
    if (data.size() < 2) throw DegenerateLabelsError("training needs at least 2 samples");
    for (const auto& r : data)
        if (!r.features) throw SchemaError("record " + r.case_id + " has no features");
    const std::vector<std::string>& schema = data.front().features->names;
    for (const auto& r : data)
        if (r.features->names != schema)
            throw SchemaError("record " + r.case_id + " has a mismatched feature schema");

    bool has_pos = false, has_neg = false;
    for (const auto& r : data) (r.label ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg)
        throw DegenerateLabelsError("training data contains a single class");

    std::vector<std::vector<double>> x;
    std::vector<double> y;
    x.reserve(data.size());
    for (const auto& r : data) {
        x.push_back(r.features->values);
        y.push_back(static_cast<double>(r.label));
    }

    GbdtModel model;
    model.base_score = hp.base_score;
    model.learning_rate = hp.learning_rate;
    model.feature_names = schema;

    std::vector<double> margin(data.size(), logit(hp.base_score));
    std::vector<double> g(data.size()), h(data.size());
    for (int round = 0; round < hp.n_estimators; ++round) {
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double p = sigmoid(margin[i]);
            g[i] = p - y[i];
            h[i] = p * (1.0 - p);
        }
        Tree tree = TreeBuilder(x, g, h, hp).build();
        for (std::size_t i = 0; i < data.size(); ++i)
            margin[i] += hp.learning_rate * tree.output(x[i]);
        model.trees.push_back(std::move(tree));
    }
    return model;
}

double predict_proba(const GbdtModel& m, const FeatureVector& x) {
    if (x.names != m.feature_names)
        throw SchemaError("feature vector does not match the model schema");
    double margin = logit(m.base_score);
    for (const Tree& tree : m.trees) margin += m.learning_rate * tree.output(x.values);
    return sigmoid(margin);
}

void save_model(const GbdtModel& m, const std::string& path) {
    nlohmann::json trees = nlohmann::json::array();
    for (const Tree& tree : m.trees) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const TreeNode& n : tree.nodes) {
            if (n.feature < 0) {
                nodes.push_back({{"weight", n.weight}});
            } else {
                nodes.push_back({{"feature", n.feature},
                                 {"threshold", n.threshold},
                                 {"left", n.left},
                                 {"right", n.right}});
            }
        }
        trees.push_back({{"nodes", std::move(nodes)}});
    }
    const nlohmann::json doc = {{"version", kModelVersion},
                                {"base_score", m.base_score},
                                {"learning_rate", m.learning_rate},
                                {"feature_names", m.feature_names},
                                {"trees", std::move(trees)}};
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    f << doc.dump(2) << '\n';
    if (!f) throw IoError("write failed for " + path);
}

GbdtModel load_model(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    nlohmann::json doc;
    try {
        f >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("model file " + path + " is not valid JSON: " + e.what());
    }

    try {
        const int version = doc.at("version").get<int>();
        if (version != kModelVersion)
            throw VersionError("model version " + std::to_string(version) +
                               " is not supported (expected " +
                               std::to_string(kModelVersion) + ")");
        GbdtModel m;
        m.base_score = doc.at("base_score").get<double>();
        m.learning_rate = doc.at("learning_rate").get<double>();
        m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
        if (m.base_score <= 0.0 || m.base_score >= 1.0)
            throw SchemaError("model base_score out of range");
        for (const auto& jt : doc.at("trees")) {
            Tree tree;
            for (const auto& jn : jt.at("nodes")) {
                TreeNode n;
                if (jn.contains("weight")) {
                    n.weight = jn.at("weight").get<double>();
                } else {
                    n.feature = jn.at("feature").get<int>();
                    n.threshold = jn.at("threshold").get<double>();
                    n.left = jn.at("left").get<std::int32_t>();
                    n.right = jn.at("right").get<std::int32_t>();
                    if (n.feature < 0 ||
                        static_cast<std::size_t>(n.feature) >= m.feature_names.size())
                        throw SchemaError("model node references feature " +
                                          std::to_string(n.feature));
                }
                tree.nodes.push_back(n);
            }
            for (const TreeNode& n : tree.nodes)
                if (n.feature >= 0 &&
                    (n.left < 0 || n.right < 0 ||
                     static_cast<std::size_t>(n.left) >= tree.nodes.size() ||
                     static_cast<std::size_t>(n.right) >= tree.nodes.size()))
                    throw SchemaError("model node has out-of-range children");
            m.trees.push_back(std::move(tree));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("model file " + path + " has a malformed schema: " + e.what());
    }
}

GridSearchResult grid_search(const std::vector<CaseRecord>& data,
                             const std::vector<GbdtHyperParams>& grid, int k,
                             std::uint64_t seed) {
    if (grid.empty()) throw RangeError("grid_search needs a non-empty grid");

    GridSearchResult result;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const MetricSummary summary = cross_validate(data, grid[i], k, seed);
        result.table.push_back({grid[i], summary.mean[0]});
        const GridSearchEntry& cur = result.table[i];
        const GridSearchEntry& best = result.table[best_index];
        const bool better =
            cur.mean_accuracy > best.mean_accuracy ||
            (cur.mean_accuracy == best.mean_accuracy &&
             (cur.hp.n_estimators < best.hp.n_estimators ||
              (cur.hp.n_estimators == best.hp.n_estimators &&
               cur.hp.max_depth < best.hp.max_depth)));
        if (better) best_index = i;
    }
    result.best = grid[best_index];
    return result;
}

std::vector<GbdtHyperParams> default_grid() {
    std::vector<GbdtHyperParams> grid;
    for (int estimators : {1, 2, 3, 5, 10})
        for (int depth : {1, 2, 3, 4})
            for (double eta : {0.1, 0.3}) {
                GbdtHyperParams hp;
                hp.n_estimators = estimators;
                hp.max_depth = depth;
                hp.learning_rate = eta;
                grid.push_back(hp);
            }
    return grid;
}

}  // namespace radpipe
