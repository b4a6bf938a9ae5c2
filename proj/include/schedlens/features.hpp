#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "schedlens/sim_state.hpp"

namespace schedlens {

// The seven per-job descriptors taken at one scheduler invocation. Run times
// estimate sequential execution of the remaining replicates; all aggregates
// count unfinished work only.
struct FeatureVector {
    double cp_runtime = 0;       // f0: run time along the critical path
    std::int64_t cp_tasks = 0;   // f1: task replicates along the critical path
    double job_runtime = 0;      // f2: run time over all unfinished nodes
    std::int64_t job_tasks = 0;  // f3: task replicates over all unfinished nodes
    double srn_runtime = 0;      // f4: run time of the smallest ready node
    std::int64_t srn_tasks = 0;  // f5: task replicates of the smallest ready node
    bool locality = false;       // f6: the free executor last served this job

    std::array<double, 7> as_array() const {
        return {cp_runtime,
                static_cast<double>(cp_tasks),
                job_runtime,
                static_cast<double>(job_tasks),
                srn_runtime,
                static_cast<double>(srn_tasks),
                locality ? 1.0 : 0.0};
    }

    static FeatureVector from_array(const std::array<double, 7>& a) {
        FeatureVector f;
        f.cp_runtime = a[0];
        f.cp_tasks = static_cast<std::int64_t>(a[1]);
        f.job_runtime = a[2];
        f.job_tasks = static_cast<std::int64_t>(a[3]);
        f.srn_runtime = a[4];
        f.srn_tasks = static_cast<std::int64_t>(a[5]);
        f.locality = a[6] != 0.0;
        return f;
    }

    bool operator==(const FeatureVector&) const = default;
};

struct CriticalPath {
    std::vector<int> nodes;  // unfinished nodes along the path, in dependency order
    double runtime = 0;
    std::int64_t tasks = 0;
};

// Dependency chain maximizing the summed remaining run time. Finished nodes
// carry zero weight, so the chain may pass through them; they are dropped
// from the reported node list.
inline CriticalPath critical_path(const JobRuntimeState& state) {
    const int n = state.node_count();
    if (state.finished())
        throw std::invalid_argument("critical_path: job " + std::to_string(state.id()) +
                                    " is fully finished");

    // Topological order via Kahn (node ids are not assumed sorted).
    std::vector<int> indeg(n, 0);
    for (int v = 0; v < n; ++v)
        for (int c : state.children(v)) ++indeg[c];
    std::vector<int> order;
    std::vector<int> queue;
    for (int v = n - 1; v >= 0; --v)
        if (indeg[v] == 0) queue.push_back(v);
    while (!queue.empty()) {
        const int v = queue.back();
        queue.pop_back();
        order.push_back(v);
        for (int c : state.children(v))
            if (--indeg[c] == 0) queue.push_back(c);
    }

    std::vector<double> best(n, 0.0);
    std::vector<int> from(n, -1);
    for (int v : order) {
        double incoming = 0.0;
        int arg = -1;
        for (int p : state.parents(v)) {  // parents ascend, so ties keep the lowest id
            if (arg == -1 || best[p] > incoming) {
                incoming = best[p];
                arg = p;
            }
        }
        best[v] = incoming + state.node_remaining_runtime(v);
        from[v] = arg;
    }

    int end = 0;
    for (int v = 1; v < n; ++v)
        if (best[v] > best[end]) end = v;

    CriticalPath cp;
    cp.runtime = best[end];
    for (int v = end; v != -1; v = from[v]) {
        if (state.tasks_unfinished(v) > 0) {
            cp.nodes.push_back(v);
            cp.tasks += state.tasks_unfinished(v);
        }
    }
    std::reverse(cp.nodes.begin(), cp.nodes.end());
    return cp;
}

// Ready node with the least remaining run time; ties go to the lowest id.
inline int smallest_ready_node(const JobRuntimeState& state) {
    int best = -1;
    double best_runtime = std::numeric_limits<double>::infinity();
    for (int v = 0; v < state.node_count(); ++v) {
        if (!state.node_ready(v)) continue;
        const double r = state.node_remaining_runtime(v);
        if (r < best_runtime) {
            best_runtime = r;
            best = v;
        }
    }
    if (best == -1)
        throw std::invalid_argument("smallest_ready_node: job " + std::to_string(state.id()) +
                                    " has no ready node");
    return best;
}

inline FeatureVector extract_features(const JobRuntimeState& state,
                                      const ExecutorState& executor) {
    FeatureVector f;
    const auto cp = critical_path(state);
    f.cp_runtime = cp.runtime;
    f.cp_tasks = cp.tasks;
    for (int v = 0; v < state.node_count(); ++v) {
        if (state.tasks_unfinished(v) == 0) continue;
        f.job_runtime += state.node_remaining_runtime(v);
        f.job_tasks += state.tasks_unfinished(v);
    }
    const int srn = smallest_ready_node(state);
    f.srn_runtime = state.node_remaining_runtime(srn);
    f.srn_tasks = state.tasks_unfinished(srn);
    f.locality = executor.bound_job.has_value() && *executor.bound_job == state.id();
    return f;
}

}  // namespace schedlens
