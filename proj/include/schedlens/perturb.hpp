#pragma once

#include "schedlens/simulator.hpp"

namespace schedlens {

// Partition of one node's task replicates into parallel sibling nodes.
struct SplitPlan {
    int node_id = 0;
    std::vector<int> parts;  // each >= 1, summing to the node's num_tasks
};

// Replaces the target node by one node per part: the first part keeps the
// original id, the rest are appended after the existing ids. Every part
// inherits all incoming and outgoing edges; siblings are not connected, so
// total work, task count, and every dependency path are preserved.
inline JobDag split_node(const JobDag& job, const SplitPlan& plan) {
    if (plan.node_id < 0 || plan.node_id >= static_cast<int>(job.nodes.size()))
        throw std::invalid_argument("split_node: node " + std::to_string(plan.node_id) +
                                    " does not exist");
    if (plan.parts.size() < 2)
        throw std::invalid_argument("split_node: plan must have at least 2 parts");
    std::int64_t sum = 0;
    for (int p : plan.parts) {
        if (p < 1) throw std::invalid_argument("split_node: every part must be >= 1");
        sum += p;
    }
    const TaskNode& original = job.nodes[static_cast<std::size_t>(plan.node_id)];
    if (sum != original.num_tasks)
        throw std::invalid_argument("split_node: parts sum to " + std::to_string(sum) +
                                    ", node has " + std::to_string(original.num_tasks) +
                                    " tasks");

    JobDag out = job;
    out.nodes[static_cast<std::size_t>(plan.node_id)].num_tasks = plan.parts[0];
    std::vector<int> siblings;
    int next_id = static_cast<int>(job.nodes.size());
    for (std::size_t i = 1; i < plan.parts.size(); ++i) {
        out.nodes.push_back({next_id, plan.parts[i], original.per_task_duration});
        siblings.push_back(next_id);
        ++next_id;
    }
    for (const auto& [p, c] : job.edges) {
        if (p == plan.node_id)
            for (int s : siblings) out.edges.emplace_back(s, c);
        if (c == plan.node_id)
            for (int s : siblings) out.edges.emplace_back(p, s);
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

struct VariantOutcome {
    std::string variant;      // "original", "plan1", "plan2", ...
    double jct = 0.0;         // finish - arrival of the target job
    double normalized = 1.0;  // jct / original jct
};

struct PerturbationResult {
    std::vector<VariantOutcome> variants;  // original first
};

// Inserts the job into the workload, replacing any job with the same id.
inline Workload with_job(const Workload& background, const JobDag& job) {
    Workload w = background;
    std::erase_if(w.jobs, [&](const JobDag& j) { return j.id == job.id; });
    w.jobs.push_back(job);
    std::sort(w.jobs.begin(), w.jobs.end(), [](const JobDag& a, const JobDag& b) {
        return std::tie(a.arrival_time, a.id) < std::tie(b.arrival_time, b.id);
    });
    return w;
}

// Runs one simulation per variant (original target plus each split plan)
// against a bit-identical background workload, executor count, and policy,
// and reports per-variant JCT normalized to the original's.
inline PerturbationResult perturbation_experiment(const Workload& background, const JobDag& target,
                                                  const std::vector<SplitPlan>& plans,
                                                  const PolicyRef& policy, int n_executors,
                                                  const SimConfig& cfg = {}) {
    const auto run = [&](const JobDag& variant) {
        Policy p(policy);  // fresh RNG per variant keeps runs comparable
        const auto result = simulate(with_job(background, variant), n_executors, p, cfg);
        const auto& record = result.trace.completions.at(target.id);
        return record.finish - record.arrival;
    };

    PerturbationResult result;
    const double original = run(target);
    result.variants.push_back({"original", original, 1.0});
    for (std::size_t i = 0; i < plans.size(); ++i) {
        const double jct = run(split_node(target, plans[i]));
        result.variants.push_back({"plan" + std::to_string(i + 1), jct, jct / original});
    }
    return result;
}

inline SplitPlan plan_from_json(const ojson& j) {
    SplitPlan plan;
    plan.node_id = j.at("node_id").get<int>();
    for (const auto& p : j.at("parts")) plan.parts.push_back(p.get<int>());
    return plan;
}

// Accepts either one plan object or an array of them.
inline std::vector<SplitPlan> load_plans(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    const ojson root = ojson::parse(in);
    std::vector<SplitPlan> plans;
    if (root.is_array())
        for (const auto& j : root) plans.push_back(plan_from_json(j));
    else
        plans.push_back(plan_from_json(root));
    return plans;
}

inline ojson perturbation_to_json(const PerturbationResult& result) {
    ojson out = ojson::array();
    for (const auto& v : result.variants) {
        ojson j;
        j["variant"] = v.variant;
        j["jct"] = v.jct;
        j["normalized"] = v.normalized;
        out.push_back(std::move(j));
    }
    return out;
}

inline void save_perturbation(const PerturbationResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << perturbation_to_json(result).dump(2) << '\n';
}

}  // namespace schedlens
