#pragma once

#include <cmath>
#include <span>

#include "schedlens/dataset.hpp"
#include "schedlens/rng.hpp"

namespace schedlens {

// Row-major feature matrix with binary labels; class 1 is positive (or the
// positive-negative pair class, depending on the layer).
struct TrainingSet {
    int n_features = 0;
    std::vector<double> values;
    std::vector<int> labels;

    std::size_t size() const { return labels.size(); }
    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * static_cast<std::size_t>(n_features),
                static_cast<std::size_t>(n_features)};
    }
    void add_row(std::span<const double> row, int label) {
        values.insert(values.end(), row.begin(), row.end());
        labels.push_back(label);
    }
};

inline TrainingSet to_training_set(const std::vector<LabeledInstance>& instances) {
    TrainingSet set;
    set.n_features = 7;
    for (const auto& inst : instances) set.add_row(inst.features.as_array(), inst.positive ? 1 : 0);
    return set;
}

namespace detail {

inline double entropy2(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0.0;
    const double n = static_cast<double>(a + b);
    const double pa = static_cast<double>(a) / n;
    const double pb = static_cast<double>(b) / n;
    return -(pa * std::log2(pa) + pb * std::log2(pb));
}

// C4.5 gain ratio from the two-way split's class counts. Degenerate splits
// (an empty side) rate 0 by convention.
inline double gain_ratio_from_counts(std::int64_t l0, std::int64_t l1, std::int64_t r0,
                                     std::int64_t r1) {
    const std::int64_t nl = l0 + l1, nr = r0 + r1;
    if (nl == 0 || nr == 0) return 0.0;
    const double n = static_cast<double>(nl + nr);
    const double gain = entropy2(l0 + r0, l1 + r1) -
                        (static_cast<double>(nl) / n) * entropy2(l0, l1) -
                        (static_cast<double>(nr) / n) * entropy2(r0, r1);
    const double split_info = entropy2(nl, nr);
    if (!(split_info > 0)) return 0.0;
    return std::max(0.0, gain) / split_info;
}

}  // namespace detail

// Gain ratio of splitting the whole set at x[feature] <= threshold.
inline double gain_ratio(const TrainingSet& set, int feature, double threshold) {
    if (set.size() == 0) throw std::invalid_argument("gain_ratio: empty dataset");
    if (feature < 0 || feature >= set.n_features)
        throw std::invalid_argument("gain_ratio: feature index out of range");
    std::int64_t l0 = 0, l1 = 0, r0 = 0, r1 = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (set.row(i)[static_cast<std::size_t>(feature)] <= threshold)
            (set.labels[i] ? l1 : l0) += 1;
        else
            (set.labels[i] ? r1 : r0) += 1;
    }
    return detail::gain_ratio_from_counts(l0, l1, r0, r1);
}

inline double gain_ratio(const std::vector<LabeledInstance>& instances, int feature,
                         double threshold) {
    return gain_ratio(to_training_set(instances), feature, threshold);
}

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;   // x[feature] <= threshold
    int right = -1;  // x[feature] > threshold
    std::array<std::int64_t, 2> counts{0, 0};  // training class counts under this node
    double gain_ratio = 0.0;                   // of this node's split; 0 at leaves

    bool is_leaf() const { return feature < 0; }
};

class DecisionTree {
public:
    DecisionTree() = default;
    DecisionTree(int n_features, std::vector<TreeNode> nodes)
        : n_features_(n_features), nodes_(std::move(nodes)) {}

    int n_features() const { return n_features_; }
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    const TreeNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    bool empty() const { return nodes_.empty(); }

    int route(std::span<const double> row) const {
        int i = 0;
        while (!nodes_[static_cast<std::size_t>(i)].is_leaf()) {
            const auto& nd = nodes_[static_cast<std::size_t>(i)];
            i = row[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
        }
        return i;
    }

    // Class at the routed leaf; an exact tie counts as class 1.
    int predict(std::span<const double> row) const {
        const auto& leaf = nodes_[static_cast<std::size_t>(route(row))];
        return leaf.counts[1] >= leaf.counts[0] ? 1 : 0;
    }

    double leaf_positive_fraction(int leaf) const {
        const auto& nd = nodes_[static_cast<std::size_t>(leaf)];
        const std::int64_t total = nd.counts[0] + nd.counts[1];
        return total == 0 ? 0.0 : static_cast<double>(nd.counts[1]) / static_cast<double>(total);
    }

private:
    int n_features_ = 0;
    std::vector<TreeNode> nodes_;
};

struct TreeGrowthParams {
    double lambda = 0.0;  // splits must beat this gain ratio to survive
    int max_depth = std::numeric_limits<int>::max();
    int features_per_split = 0;  // 0 considers every feature
};

namespace detail {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double ratio = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const TrainingSet& set, const TreeGrowthParams& params, std::mt19937_64* rng)
        : set_(set), params_(params), rng_(rng) {}

    DecisionTree build(std::vector<std::size_t> indices) {
        grow(std::move(indices), 0);
        return DecisionTree(set_.n_features, std::move(nodes_));
    }

private:
    int grow(std::vector<std::size_t> indices, int depth) {
        std::array<std::int64_t, 2> counts{0, 0};
        for (std::size_t i : indices) counts[static_cast<std::size_t>(set_.labels[i])] += 1;
        const int me = static_cast<int>(nodes_.size());
        nodes_.push_back(TreeNode{.counts = counts});
        if (counts[0] == 0 || counts[1] == 0 || depth >= params_.max_depth) return me;

        const SplitChoice best = best_split(indices);
        if (best.feature < 0 || best.ratio <= params_.lambda) return me;

        std::vector<std::size_t> left, right;
        for (std::size_t i : indices)
            (set_.row(i)[static_cast<std::size_t>(best.feature)] <= best.threshold ? left : right)
                .push_back(i);
        indices.clear();
        indices.shrink_to_fit();

        nodes_[static_cast<std::size_t>(me)].feature = best.feature;
        nodes_[static_cast<std::size_t>(me)].threshold = best.threshold;
        nodes_[static_cast<std::size_t>(me)].gain_ratio = best.ratio;
        const int l = grow(std::move(left), depth + 1);
        nodes_[static_cast<std::size_t>(me)].left = l;
        const int r = grow(std::move(right), depth + 1);
        nodes_[static_cast<std::size_t>(me)].right = r;
        return me;
    }

    std::vector<int> candidate_features() {
        std::vector<int> all(static_cast<std::size_t>(set_.n_features));
        for (int f = 0; f < set_.n_features; ++f) all[static_cast<std::size_t>(f)] = f;
        if (params_.features_per_split <= 0 || params_.features_per_split >= set_.n_features ||
            rng_ == nullptr)
            return all;
        // Partial Fisher-Yates, then sorted so threshold ties stay deterministic.
        for (int k = 0; k < params_.features_per_split; ++k) {
            const auto j = static_cast<std::size_t>(
                uniform_int(*rng_, k, static_cast<std::int64_t>(set_.n_features) - 1));
            std::swap(all[static_cast<std::size_t>(k)], all[j]);
        }
        all.resize(static_cast<std::size_t>(params_.features_per_split));
        std::sort(all.begin(), all.end());
        return all;
    }

    // Thresholds are midpoints between consecutive distinct sorted values.
    // Strict improvement keeps the lowest feature index and threshold on ties.
    SplitChoice best_split(const std::vector<std::size_t>& indices) {
        SplitChoice best;
        std::int64_t t0 = 0, t1 = 0;
        for (std::size_t i : indices) (set_.labels[i] ? t1 : t0) += 1;

        std::vector<std::pair<double, int>> column(indices.size());
        for (const int f : candidate_features()) {
            for (std::size_t k = 0; k < indices.size(); ++k)
                column[k] = {set_.row(indices[k])[static_cast<std::size_t>(f)],
                             set_.labels[indices[k]]};
            std::sort(column.begin(), column.end());
            std::int64_t l0 = 0, l1 = 0;
            for (std::size_t k = 0; k + 1 < column.size(); ++k) {
                (column[k].second ? l1 : l0) += 1;
                if (column[k].first == column[k + 1].first) continue;
                const double threshold =
                    column[k].first + (column[k + 1].first - column[k].first) / 2;
                const double ratio =
                    gain_ratio_from_counts(l0, l1, t0 - l0, t1 - l1);
                if (ratio > best.ratio) best = {f, threshold, ratio};
            }
        }
        return best;
    }

    const TrainingSet& set_;
    TreeGrowthParams params_;
    std::mt19937_64* rng_;
    std::vector<TreeNode> nodes_;
};

}  // namespace detail

inline DecisionTree grow_tree(const TrainingSet& set, std::vector<std::size_t> indices,
                              const TreeGrowthParams& params, std::mt19937_64* rng = nullptr) {
    if (indices.empty()) throw std::invalid_argument("grow_tree: empty index set");
    return detail::TreeBuilder(set, params, rng).build(std::move(indices));
}

inline DecisionTree grow_tree(const TrainingSet& set, const TreeGrowthParams& params,
                              std::mt19937_64* rng = nullptr) {
    std::vector<std::size_t> indices(set.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    return grow_tree(set, std::move(indices), params, rng);
}

// Greedy C4.5 over the stage dataset: each node takes the (feature,
// threshold) with the highest gain ratio and is pruned to a leaf unless that
// ratio beats lambda. A single-class dataset yields a single-leaf tree.
inline DecisionTree train_c45(const std::vector<LabeledInstance>& instances, double lambda,
                              int max_depth) {
    if (instances.empty()) throw std::invalid_argument("train_c45: empty dataset");
    if (!(lambda >= 0.0) || lambda >= 1.0)
        throw std::invalid_argument("train_c45: lambda must be in [0, 1)");
    if (max_depth < 0) throw std::invalid_argument("train_c45: max_depth must be >= 0");
    return grow_tree(to_training_set(instances),
                     TreeGrowthParams{.lambda = lambda, .max_depth = max_depth});
}

// Instances landing in leaves whose positive share is below the bar; these
// are the choices the tree alone does not explain, forwarded for pairing.
inline std::vector<LabeledInstance> mixed_leaf_instances(
    const DecisionTree& tree, const std::vector<LabeledInstance>& instances,
    double positive_purity = 0.95) {
    std::vector<LabeledInstance> out;
    for (const auto& inst : instances) {
        const int leaf = tree.route(inst.features.as_array());
        if (tree.leaf_positive_fraction(leaf) < positive_purity) out.push_back(inst);
    }
    return out;
}

inline ojson tree_to_json(const DecisionTree& tree) {
    ojson root;
    root["n_features"] = tree.n_features();
    root["nodes"] = ojson::array();
    for (const auto& nd : tree.nodes()) {
        ojson j;
        j["feature_index"] = nd.feature;
        j["threshold"] = nd.threshold;
        j["left"] = nd.left;
        j["right"] = nd.right;
        j["counts"] = ojson::array({nd.counts[0], nd.counts[1]});
        j["gain_ratio"] = nd.gain_ratio;
        root["nodes"].push_back(std::move(j));
    }
    return root;
}

inline DecisionTree tree_from_json(const ojson& root) {
    std::vector<TreeNode> nodes;
    for (const auto& j : root.at("nodes")) {
        TreeNode nd;
        nd.feature = j.at("feature_index").get<int>();
        nd.threshold = j.at("threshold").get<double>();
        nd.left = j.at("left").get<int>();
        nd.right = j.at("right").get<int>();
        nd.counts = {j.at("counts").at(0).get<std::int64_t>(),
                     j.at("counts").at(1).get<std::int64_t>()};
        nd.gain_ratio = j.at("gain_ratio").get<double>();
        nodes.push_back(nd);
    }
    if (nodes.empty()) throw std::runtime_error("tree: no nodes");
    return DecisionTree(root.at("n_features").get<int>(), std::move(nodes));
}

inline void save_tree(const DecisionTree& tree, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << tree_to_json(tree).dump(2) << '\n';
}

inline DecisionTree load_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return tree_from_json(ojson::parse(in));
}

// Branch label from the root split, e.g. "f6<=0.5" / "f6>0.5"; single-leaf
// trees label everything "all".
inline std::string root_branch_label(const DecisionTree& tree, std::span<const double> row) {
    const auto& root = tree.node(0);
    if (root.is_leaf()) return "all";
    const std::string base = "f" + std::to_string(root.feature);
    if (row[static_cast<std::size_t>(root.feature)] <= root.threshold)
        return base + "<=" + detail::format_double(root.threshold);
    return base + ">" + detail::format_double(root.threshold);
}

}  // namespace schedlens
