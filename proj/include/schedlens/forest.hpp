#pragma once

#include "schedlens/tree.hpp"

namespace schedlens {

// PN = the scheduled job's features first, NP = the mirrored order.
enum class PairClass { PN, NP };

inline const char* to_string(PairClass c) { return c == PairClass::PN ? "PN" : "NP"; }

struct PairedInstance {
    std::array<double, 14> values{};  // left job's f0..f6 then right job's f0..f6
    PairClass pair_class = PairClass::PN;
    int stage = 0;

    bool operator==(const PairedInstance&) const = default;
};

inline std::array<double, 14> concat_features(const FeatureVector& left,
                                              const FeatureVector& right) {
    std::array<double, 14> v{};
    const auto l = left.as_array(), r = right.as_array();
    std::copy(l.begin(), l.end(), v.begin());
    std::copy(r.begin(), r.end(), v.begin() + 7);
    return v;
}

// Pairs each stage's positive with up to max_neg negatives (lowest job ids
// first, for reproducibility), emitting the PN pair and its NP mirror, so the
// two classes stay balanced. Stages missing a positive or negatives under the
// given instances contribute nothing.
inline std::vector<PairedInstance> pair_instances(const std::vector<LabeledInstance>& instances,
                                                  int max_neg) {
    if (max_neg < 1) throw std::invalid_argument("pair_instances: max_neg must be >= 1");
    struct StageGroup {
        const LabeledInstance* positive = nullptr;
        std::vector<const LabeledInstance*> negatives;
    };
    std::map<int, StageGroup> stages;
    for (const auto& inst : instances) {
        auto& group = stages[inst.stage];
        if (inst.positive) {
            if (group.positive)
                throw std::invalid_argument("pair_instances: stage " + std::to_string(inst.stage) +
                                            " has multiple positive instances");
            group.positive = &inst;
        } else {
            group.negatives.push_back(&inst);
        }
    }
    std::vector<PairedInstance> out;
    for (auto& [stage, group] : stages) {
        if (!group.positive || group.negatives.empty()) continue;
        std::sort(group.negatives.begin(), group.negatives.end(),
                  [](const LabeledInstance* a, const LabeledInstance* b) { return a->job < b->job; });
        const std::size_t take =
            std::min(group.negatives.size(), static_cast<std::size_t>(max_neg));
        for (std::size_t i = 0; i < take; ++i) {
            const auto& neg = *group.negatives[i];
            out.push_back({concat_features(group.positive->features, neg.features),
                           PairClass::PN, stage});
            out.push_back({concat_features(neg.features, group.positive->features),
                           PairClass::NP, stage});
        }
    }
    return out;
}

inline TrainingSet to_training_set(const std::vector<PairedInstance>& pairs) {
    TrainingSet set;
    set.n_features = 14;
    for (const auto& p : pairs) set.add_row(p.values, p.pair_class == PairClass::PN ? 1 : 0);
    return set;
}

// Small forest over 14-feature pairs. The tree count is capped at 20 to keep
// the model walkable by a human reader.
class RandomForest {
public:
    static constexpr int kMaxTrees = 20;

    RandomForest() = default;
    RandomForest(std::vector<DecisionTree> trees, int max_depth, std::uint64_t seed)
        : trees_(std::move(trees)), max_depth_(max_depth), seed_(seed) {
        if (trees_.empty() || trees_.size() > static_cast<std::size_t>(kMaxTrees))
            throw std::invalid_argument("RandomForest: tree count must be in [1, 20]");
    }

    const std::vector<DecisionTree>& trees() const { return trees_; }
    int n_trees() const { return static_cast<int>(trees_.size()); }
    int max_depth() const { return max_depth_; }
    std::uint64_t seed() const { return seed_; }

    int pn_votes(std::span<const double> values) const {
        int votes = 0;
        for (const auto& t : trees_) votes += t.predict(values);
        return votes;
    }

private:
    std::vector<DecisionTree> trees_;
    int max_depth_ = 0;
    std::uint64_t seed_ = 0;
};

// Bootstrap-sampled trees with per-node feature subsampling (round(sqrt(14))
// = 4 features per split). Tree t is seeded with seed + t, so serial and
// parallel training coincide.
inline RandomForest train_rf(const std::vector<PairedInstance>& pairs, int n_trees, int max_depth,
                             std::uint64_t seed) {
    if (n_trees < 1 || n_trees > RandomForest::kMaxTrees)
        throw std::invalid_argument("train_rf: n_trees must be in [1, 20]");
    if (pairs.empty()) throw std::invalid_argument("train_rf: empty pair set");
    bool has_pn = false, has_np = false;
    for (const auto& p : pairs) (p.pair_class == PairClass::PN ? has_pn : has_np) = true;
    if (!has_pn || !has_np)
        throw std::invalid_argument("train_rf: both pair classes must be present");

    const TrainingSet set = to_training_set(pairs);
    const int features_per_split =
        static_cast<int>(std::lround(std::sqrt(static_cast<double>(set.n_features))));
    std::vector<DecisionTree> trees;
    for (int t = 0; t < n_trees; ++t) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t));
        std::vector<std::size_t> bootstrap(set.size());
        for (auto& idx : bootstrap)
            idx = static_cast<std::size_t>(
                uniform_int(rng, 0, static_cast<std::int64_t>(set.size()) - 1));
        trees.push_back(grow_tree(set, std::move(bootstrap),
                                  TreeGrowthParams{.max_depth = max_depth,
                                                   .features_per_split = features_per_split},
                                  &rng));
    }
    return RandomForest(std::move(trees), max_depth, seed);
}

struct PairPrediction {
    PairClass pair_class = PairClass::PN;
    double vote_fraction = 0.0;  // winning votes / n_trees
};

// Majority vote; an exact tie counts as PN.
inline PairPrediction classify_pair(const RandomForest& forest, std::span<const double> values) {
    const int pn = forest.pn_votes(values);
    const int n = forest.n_trees();
    const bool is_pn = 2 * pn >= n;
    return {is_pn ? PairClass::PN : PairClass::NP,
            static_cast<double>(is_pn ? pn : n - pn) / static_cast<double>(n)};
}

// Fraction of trees voting PN; the ranking score behind the ROC sweep.
inline double pn_score(const RandomForest& forest, std::span<const double> values) {
    return static_cast<double>(forest.pn_votes(values)) / static_cast<double>(forest.n_trees());
}

struct PathStep {
    int feature = 0;  // 0-6 left (scheduled-slot) half, 7-13 right half
    double threshold = 0.0;
    bool went_left = false;

    bool operator==(const PathStep&) const = default;
};

inline bool touches_first_half(const PathStep& step) { return step.feature < 7; }

struct DecisionPath {
    int tree_id = 0;
    std::vector<PathStep> steps;
    PairClass predicted = PairClass::PN;
};

// One root-to-leaf path per tree for the given pair.
inline std::vector<DecisionPath> decision_paths(const RandomForest& forest,
                                                std::span<const double> values) {
    std::vector<DecisionPath> out;
    for (int t = 0; t < forest.n_trees(); ++t) {
        const DecisionTree& tree = forest.trees()[static_cast<std::size_t>(t)];
        DecisionPath path;
        path.tree_id = t;
        int i = 0;
        while (!tree.node(i).is_leaf()) {
            const auto& nd = tree.node(i);
            const bool left = values[static_cast<std::size_t>(nd.feature)] <= nd.threshold;
            path.steps.push_back({nd.feature, nd.threshold, left});
            i = left ? nd.left : nd.right;
        }
        path.predicted = tree.node(i).counts[1] >= tree.node(i).counts[0] ? PairClass::PN
                                                                          : PairClass::NP;
        out.push_back(std::move(path));
    }
    return out;
}

struct FidelityReport {
    double accuracy = 0.0;
    std::vector<std::pair<double, double>> roc;  // (fpr, tpr), (0,0) .. (1,1)
    double auc = 0.0;
    std::array<std::array<std::int64_t, 2>, 2> confusion{};  // [actual][predicted], 0 = PN
};

// Accuracy and confusion at the majority-vote threshold; ROC swept over the
// PN vote fraction with PN as the positive class; AUC by trapezoid rule.
inline FidelityReport evaluate_classifier(const RandomForest& forest,
                                          const std::vector<PairedInstance>& test_pairs) {
    if (test_pairs.empty()) throw std::invalid_argument("evaluate_classifier: empty test set");
    bool has_pn = false, has_np = false;
    for (const auto& p : test_pairs) (p.pair_class == PairClass::PN ? has_pn : has_np) = true;
    if (!has_pn || !has_np)
        throw std::invalid_argument(
            "evaluate_classifier: AUC undefined for a single-class test set");

    FidelityReport report;
    const int n = forest.n_trees();
    std::vector<std::pair<double, int>> scored;  // (pn score, actual is PN)
    for (const auto& p : test_pairs) {
        const int pn = forest.pn_votes(p.values);
        const int actual = p.pair_class == PairClass::PN ? 0 : 1;
        const int predicted = 2 * pn >= n ? 0 : 1;
        report.confusion[static_cast<std::size_t>(actual)][static_cast<std::size_t>(predicted)] +=
            1;
        scored.emplace_back(static_cast<double>(pn) / static_cast<double>(n),
                            p.pair_class == PairClass::PN ? 1 : 0);
    }
    report.accuracy =
        static_cast<double>(report.confusion[0][0] + report.confusion[1][1]) /
        static_cast<double>(test_pairs.size());

    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        return a.first > b.first;
    });
    const double total_pos = static_cast<double>(std::count_if(
        scored.begin(), scored.end(), [](const auto& s) { return s.second == 1; }));
    const double total_neg = static_cast<double>(scored.size()) - total_pos;
    report.roc.emplace_back(0.0, 0.0);
    std::int64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < scored.size()) {
        const double score = scored[i].first;
        while (i < scored.size() && scored[i].first == score) {
            (scored[i].second ? tp : fp) += 1;
            ++i;
        }
        report.roc.emplace_back(static_cast<double>(fp) / total_neg,
                                static_cast<double>(tp) / total_pos);
    }
    for (std::size_t k = 0; k + 1 < report.roc.size(); ++k) {
        const auto& [x0, y0] = report.roc[k];
        const auto& [x1, y1] = report.roc[k + 1];
        report.auc += (x1 - x0) * (y0 + y1) / 2;
    }
    return report;
}

inline ojson forest_to_json(const RandomForest& forest) {
    ojson root;
    root["n_trees"] = forest.n_trees();
    root["max_depth"] = forest.max_depth();
    root["seed"] = forest.seed();
    root["trees"] = ojson::array();
    for (const auto& t : forest.trees()) root["trees"].push_back(tree_to_json(t));
    return root;
}

inline RandomForest forest_from_json(const ojson& root) {
    std::vector<DecisionTree> trees;
    for (const auto& tj : root.at("trees")) trees.push_back(tree_from_json(tj));
    return RandomForest(std::move(trees), root.at("max_depth").get<int>(),
                        root.at("seed").get<std::uint64_t>());
}

inline void save_forest(const RandomForest& forest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << forest_to_json(forest).dump(2) << '\n';
}

inline RandomForest load_forest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return forest_from_json(ojson::parse(in));
}

inline ojson report_to_json(const FidelityReport& report) {
    ojson j;
    j["accuracy"] = report.accuracy;
    j["auc"] = report.auc;
    j["roc"] = ojson::array();
    for (const auto& [fpr, tpr] : report.roc) j["roc"].push_back(ojson::array({fpr, tpr}));
    j["confusion"] = ojson::array({ojson::array({report.confusion[0][0], report.confusion[0][1]}),
                                   ojson::array({report.confusion[1][0], report.confusion[1][1]})});
    return j;
}

inline void save_report(const FidelityReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << report_to_json(report).dump(2) << '\n';
}

inline ojson decision_paths_to_json(const std::vector<DecisionPath>& paths) {
    ojson out = ojson::array();
    for (const auto& p : paths) {
        ojson pj;
        pj["tree"] = p.tree_id;
        pj["predicted"] = to_string(p.predicted);
        pj["steps"] = ojson::array();
        for (const auto& s : p.steps) {
            ojson sj;
            sj["feature"] = s.feature;
            sj["half"] = touches_first_half(s) ? "left" : "right";
            sj["threshold"] = s.threshold;
            sj["went_left"] = s.went_left;
            pj["steps"].push_back(std::move(sj));
        }
        out.push_back(std::move(pj));
    }
    return out;
}

}  // namespace schedlens
