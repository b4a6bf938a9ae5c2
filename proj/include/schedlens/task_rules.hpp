#pragma once

#include <string>

#include "schedlens/features.hpp"

namespace schedlens {

// Classical within-job node selection rules used for task-level alignment.
enum class TaskRule { Snf, Cps, Fcfs };

inline const char* to_string(TaskRule rule) {
    switch (rule) {
        case TaskRule::Snf: return "snf";
        case TaskRule::Cps: return "cps";
        case TaskRule::Fcfs: return "fcfs";
    }
    return "?";
}

// SNF: least remaining run time. CPS: first ready node along the current
// critical path, falling back to SNF when none of its nodes is ready.
// FCFS: earliest ready time. All ties resolve to the lowest node id.
inline int rule_choice(TaskRule rule, const JobRuntimeState& state) {
    switch (rule) {
        case TaskRule::Snf:
            return smallest_ready_node(state);
        case TaskRule::Cps: {
            const auto cp = critical_path(state);
            for (int v : cp.nodes)
                if (state.node_ready(v)) return v;
            return rule_choice(TaskRule::Snf, state);
        }
        case TaskRule::Fcfs: {
            int best = -1;
            double best_time = 0;
            for (int v = 0; v < state.node_count(); ++v) {
                if (!state.node_ready(v)) continue;
                const double t = *state.node_ready_time(v);
                if (best == -1 || t < best_time) {
                    best = v;
                    best_time = t;
                }
            }
            if (best == -1)
                throw std::invalid_argument("rule_choice: job " + std::to_string(state.id()) +
                                            " has no ready node");
            return best;
        }
    }
    throw std::logic_error("rule_choice: unknown rule");
}

}  // namespace schedlens
