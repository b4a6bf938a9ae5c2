#pragma once

// Independent reference computations the implementation is checked against.
// Everything here recomputes from first principles and must stay decoupled
// from the library's code paths.

#include <cmath>
#include <map>
#include <vector>

#include "schedlens/schedlens.hpp"

namespace oracles {

// Entropy-arithmetic gain ratio over explicit left/right partitions.
inline double gain_ratio_brute(const std::vector<std::vector<double>>& rows,
                               const std::vector<int>& labels, int feature, double threshold) {
    std::vector<int> left, right;
    for (std::size_t i = 0; i < rows.size(); ++i)
        (rows[i][static_cast<std::size_t>(feature)] <= threshold ? left : right)
            .push_back(labels[i]);
    if (left.empty() || right.empty()) return 0.0;
    const auto entropy = [](const std::vector<int>& ys) {
        double h = 0.0;
        for (int cls : {0, 1}) {
            std::size_t count = 0;
            for (int y : ys)
                if (y == cls) ++count;
            if (count == 0) continue;
            const double p = static_cast<double>(count) / static_cast<double>(ys.size());
            h -= p * std::log2(p);
        }
        return h;
    };
    const double n = static_cast<double>(rows.size());
    const double wl = static_cast<double>(left.size()) / n;
    const double wr = static_cast<double>(right.size()) / n;
    std::vector<int> all = left;
    all.insert(all.end(), right.begin(), right.end());
    const double gain = entropy(all) - wl * entropy(left) - wr * entropy(right);
    const double split_info = -(wl * std::log2(wl) + wr * std::log2(wr));
    return std::max(0.0, gain) / split_info;
}

// Longest dependency chain by exhaustive traversal from every root,
// accumulating remaining run time in path order.
inline double critical_path_brute(const schedlens::JobRuntimeState& state) {
    double best = 0.0;
    const auto dfs = [&](auto&& self, int v, double acc) -> void {
        const double total = acc + state.node_remaining_runtime(v);
        best = std::max(best, total);
        for (int c : state.children(v)) self(self, c, total);
    };
    for (int v = 0; v < state.node_count(); ++v)
        if (state.parents(v).empty()) dfs(dfs, v, 0.0);
    return best;
}

// Mann-Whitney pair-counting AUC; ties score one half.
inline double auc_brute(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t p = 0; p < scores.size(); ++p) {
        if (labels[p] != 1) continue;
        for (std::size_t q = 0; q < scores.size(); ++q) {
            if (labels[q] != 0) continue;
            ++pairs;
            if (scores[p] > scores[q])
                wins += 1.0;
            else if (scores[p] == scores[q])
                wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

// Cycle check by DFS coloring (the library uses Kahn's algorithm).
inline bool is_acyclic(const schedlens::JobDag& job) {
    const int n = static_cast<int>(job.nodes.size());
    std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
    for (const auto& [p, c] : job.edges) children[static_cast<std::size_t>(p)].push_back(c);
    std::vector<int> color(static_cast<std::size_t>(n), 0);  // 0 new, 1 open, 2 done
    const auto dfs = [&](auto&& self, int v) -> bool {
        color[static_cast<std::size_t>(v)] = 1;
        for (int c : children[static_cast<std::size_t>(v)]) {
            if (color[static_cast<std::size_t>(c)] == 1) return false;
            if (color[static_cast<std::size_t>(c)] == 0 && !self(self, c)) return false;
        }
        color[static_cast<std::size_t>(v)] = 2;
        return true;
    };
    for (int v = 0; v < n; ++v)
        if (color[static_cast<std::size_t>(v)] == 0 && !dfs(dfs, v)) return false;
    return true;
}

// Every original dependency must survive as edges between all part images.
inline bool split_preserves_edges(const schedlens::JobDag& original,
                                  const schedlens::JobDag& split, int split_id,
                                  const std::vector<int>& images) {
    const auto has_edge = [&](int p, int c) {
        return std::binary_search(split.edges.begin(), split.edges.end(), std::pair{p, c});
    };
    for (const auto& [p, c] : original.edges) {
        const std::vector<int> ps = p == split_id ? images : std::vector<int>{p};
        const std::vector<int> cs = c == split_id ? images : std::vector<int>{c};
        for (int pp : ps)
            for (int cc : cs)
                if (!has_edge(pp, cc)) return false;
    }
    return true;
}

struct TraceCheck {
    bool conservation = false;
    bool monopoly = false;
    bool precedence = false;
    bool one_positive = false;
};

// Recounts scheduling invariants straight from the raw trace: replicate
// counts per node, executor busy intervals, and start-after-parents, all
// re-deriving warm/cold durations from the decision sequence alone.
inline TraceCheck check_trace(const schedlens::Workload& workload,
                              const schedlens::Trace& trace, double warmup_delay) {
    using namespace schedlens;
    TraceCheck result{true, true, true, true};
    std::map<int, const JobDag*> jobs;
    for (const auto& j : workload.jobs) jobs[j.id] = &j;

    std::map<std::pair<int, int>, std::int64_t> scheduled;  // (job, node) -> replicates
    std::map<std::pair<int, int>, double> last_finish;
    std::map<int, std::vector<std::pair<double, double>>> busy;  // executor -> intervals
    std::map<int, std::optional<int>> bound;
    std::vector<std::pair<double, const Decision*>> ordered;
    for (const auto& d : trace.decisions) ordered.emplace_back(d.time, &d);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    for (const auto& [time, dp] : ordered) {
        const Decision& d = *dp;
        std::size_t positives = 0;
        for (const auto& c : d.candidates)
            if (c.job == d.chosen_job) ++positives;
        if (positives != 1) result.one_positive = false;

        const JobDag* job = jobs.at(d.chosen_job);
        const bool cold = !bound[d.executor] || *bound[d.executor] != d.chosen_job;
        const double duration =
            job->nodes[static_cast<std::size_t>(d.chosen_node)].per_task_duration +
            (cold ? warmup_delay : 0.0);
        busy[d.executor].emplace_back(d.time, d.time + duration);
        bound[d.executor] = d.chosen_job;
        ++scheduled[{d.chosen_job, d.chosen_node}];
        auto& lf = last_finish[{d.chosen_job, d.chosen_node}];
        lf = std::max(lf, d.time + duration);
    }

    for (const auto& j : workload.jobs)
        for (const auto& nd : j.nodes)
            if (scheduled[{j.id, nd.id}] != nd.num_tasks) result.conservation = false;

    for (auto& [exec, intervals] : busy) {
        std::sort(intervals.begin(), intervals.end());
        for (std::size_t i = 0; i + 1 < intervals.size(); ++i)
            if (intervals[i + 1].first < intervals[i].second - 1e-12) result.monopoly = false;
    }

    for (const auto& [time, dp] : ordered) {
        const Decision& d = *dp;
        const JobDag* job = jobs.at(d.chosen_job);
        for (const auto& [p, c] : job->edges)
            if (c == d.chosen_node && d.time < last_finish[{d.chosen_job, p}] - 1e-12)
                result.precedence = false;
    }
    return result;
}

}  // namespace oracles
