#pragma once

#include <functional>

#include "schedlens/rng.hpp"
#include "schedlens/task_rules.hpp"

namespace schedlens {

enum class PolicyKind { Reference, Snf, Cps, Fcfs, Random };

inline const char* to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Reference: return "reference";
        case PolicyKind::Snf: return "snf";
        case PolicyKind::Cps: return "cps";
        case PolicyKind::Fcfs: return "fcfs";
        case PolicyKind::Random: return "random";
    }
    return "?";
}

inline PolicyKind policy_kind_from_string(const std::string& s) {
    if (s == "reference") return PolicyKind::Reference;
    if (s == "snf") return PolicyKind::Snf;
    if (s == "cps") return PolicyKind::Cps;
    if (s == "fcfs") return PolicyKind::Fcfs;
    if (s == "random") return PolicyKind::Random;
    throw std::invalid_argument("unknown policy kind: " + s);
}

struct PolicyRef {
    PolicyKind kind = PolicyKind::Reference;
    // Reference only: serve the executor's bound job first when it has ready work.
    bool locality_first = true;
    // Probability of replacing the decision with a uniform random (job, node) pick.
    double epsilon = 0.0;
    // Seed for the Random kind and for epsilon draws.
    std::uint64_t seed = 0;
};

struct NodeChoice {
    int job = -1;
    int node = -1;

    bool operator==(const NodeChoice&) const = default;
};

// A scheduling policy instance. Pure decision function except for the RNG
// state used by Random and epsilon draws; use one instance per simulation.
class Policy {
public:
    explicit Policy(const PolicyRef& ref) : ref_(ref), rng_(ref.seed) {}

    const PolicyRef& ref() const { return ref_; }

    // Picks (job, node) among candidate jobs, each of which must have at
    // least one ready node. Ties everywhere: lowest job id, lowest node id.
    NodeChoice decide(const std::vector<const JobRuntimeState*>& candidates,
                      const ExecutorState& executor, double now) {
        (void)now;
        if (candidates.empty())
            throw std::invalid_argument("decide: empty candidate set");
        if (ref_.epsilon > 0 && uniform_unit(rng_) < ref_.epsilon) return random_pick(candidates);

        switch (ref_.kind) {
            case PolicyKind::Reference: {
                if (ref_.locality_first && executor.bound_job) {
                    for (const auto* c : candidates)
                        if (c->id() == *executor.bound_job)
                            return {c->id(), rule_choice(TaskRule::Fcfs, *c)};
                }
                return smallest_ready_node_pick(candidates);
            }
            case PolicyKind::Snf:
                return smallest_ready_node_pick(candidates);
            case PolicyKind::Cps: {
                // Across jobs, prioritize the longest remaining critical path;
                // within the job, follow the CPS rule.
                const JobRuntimeState* best = nullptr;
                double best_runtime = 0;
                for (const auto* c : candidates) {
                    const double r = critical_path(*c).runtime;
                    if (!best || r > best_runtime) {
                        best = c;
                        best_runtime = r;
                    }
                }
                return {best->id(), rule_choice(TaskRule::Cps, *best)};
            }
            case PolicyKind::Fcfs: {
                const JobRuntimeState* best = nullptr;
                int best_node = -1;
                double best_time = 0;
                for (const auto* c : candidates) {
                    const int v = rule_choice(TaskRule::Fcfs, *c);
                    const double t = *c->node_ready_time(v);
                    if (!best || t < best_time) {
                        best = c;
                        best_node = v;
                        best_time = t;
                    }
                }
                return {best->id(), best_node};
            }
            case PolicyKind::Random:
                return random_pick(candidates);
        }
        throw std::logic_error("decide: unknown policy kind");
    }

private:
    static NodeChoice smallest_ready_node_pick(
        const std::vector<const JobRuntimeState*>& candidates) {
        const JobRuntimeState* best = nullptr;
        int best_node = -1;
        double best_runtime = 0;
        for (const auto* c : candidates) {  // candidates ascend by job id
            const int v = smallest_ready_node(*c);
            const double r = c->node_remaining_runtime(v);
            if (!best || r < best_runtime) {
                best = c;
                best_node = v;
                best_runtime = r;
            }
        }
        return {best->id(), best_node};
    }

    NodeChoice random_pick(const std::vector<const JobRuntimeState*>& candidates) {
        const auto* c = candidates[static_cast<std::size_t>(
            uniform_int(rng_, 0, static_cast<std::int64_t>(candidates.size()) - 1))];
        const auto ready = ready_nodes(*c);
        if (ready.empty())
            throw std::invalid_argument("decide: candidate job " + std::to_string(c->id()) +
                                        " has no ready node");
        return {c->id(),
                ready[static_cast<std::size_t>(
                    uniform_int(rng_, 0, static_cast<std::int64_t>(ready.size()) - 1))]};
    }

    PolicyRef ref_;
    std::mt19937_64 rng_;
};

}  // namespace schedlens
