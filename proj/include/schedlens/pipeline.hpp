#pragma once

#include "schedlens/forest.hpp"
#include "schedlens/perturb.hpp"
#include "schedlens/rules_align.hpp"

namespace schedlens {

// Full recovery experiment: generate one workload per seed, simulate, train
// the job-level tree and pair forest on all traces but the last, and evaluate
// fidelity plus task-rule alignment on the held-out one.
struct PipelineConfig {
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};  // last seed is the held-out trace
    int n_jobs = 30;
    double mean_interarrival = 25.0;
    DagShapeParams shape{};
    int n_executors = 5;
    PolicyRef policy{};
    SimConfig sim{};
    double lambda = 0.5;
    int tree_max_depth = 10;
    double positive_purity = 0.95;
    int max_neg = 5;
    int n_trees = 15;
    int rf_max_depth = 9;
    std::uint64_t rf_seed = 42;
};

struct PipelineResult {
    std::vector<Workload> workloads;
    std::vector<Trace> traces;
    std::vector<Metrics> metrics;
    std::vector<LabeledInstance> train_instances;  // stages offset per trace
    std::vector<LabeledInstance> test_instances;
    DecisionTree tree;
    std::vector<PairedInstance> train_pairs;
    std::vector<PairedInstance> test_pairs;
    RandomForest forest;
    FidelityReport report;
    std::vector<AlignmentReport> alignment;  // on the held-out trace
};

inline PipelineResult run_pipeline(const PipelineConfig& cfg) {
    if (cfg.seeds.size() < 2)
        throw std::invalid_argument("run_pipeline: need at least one training and one test seed");

    PipelineResult result;
    int stage_offset = 0;
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        result.workloads.push_back(
            generate_workload(cfg.seeds[i], cfg.n_jobs, cfg.mean_interarrival, cfg.shape));
        auto sim = simulate(result.workloads.back(), cfg.n_executors, cfg.policy, cfg.sim);
        auto instances = build_stage_dataset(sim.trace);
        const bool is_test = i + 1 == cfg.seeds.size();
        if (is_test) {
            result.test_instances = std::move(instances);
        } else {
            instances = offset_stages(std::move(instances), stage_offset);
            result.train_instances.insert(result.train_instances.end(), instances.begin(),
                                          instances.end());
            stage_offset += static_cast<int>(sim.trace.decisions.size());
        }
        result.metrics.push_back(sim.metrics);
        result.traces.push_back(std::move(sim.trace));
    }

    result.tree = train_c45(result.train_instances, cfg.lambda, cfg.tree_max_depth);
    result.train_pairs = pair_instances(
        mixed_leaf_instances(result.tree, result.train_instances, cfg.positive_purity),
        cfg.max_neg);
    result.test_pairs = pair_instances(
        mixed_leaf_instances(result.tree, result.test_instances, cfg.positive_purity),
        cfg.max_neg);
    result.forest = train_rf(result.train_pairs, cfg.n_trees, cfg.rf_max_depth, cfg.rf_seed);
    result.report = evaluate_classifier(result.forest, result.test_pairs);
    result.alignment = align_rules(result.workloads.back(), result.traces.back(), cfg.sim,
                                   branch_by_tree_root(result.tree));
    return result;
}

}  // namespace schedlens
