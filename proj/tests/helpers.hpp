#pragma once

#include <filesystem>
#include <fstream>

#include "schedlens/schedlens.hpp"

namespace test_helpers {

using namespace schedlens;

// nodes given as (num_tasks, per_task_duration) in id order
inline JobDag make_job(int id, double arrival, std::vector<std::pair<int, double>> nodes,
                       std::vector<std::pair<int, int>> edges = {}) {
    JobDag job;
    job.id = id;
    job.arrival_time = arrival;
    int node_id = 0;
    for (const auto& [tasks, dur] : nodes) job.nodes.push_back({node_id++, tasks, dur});
    job.edges = std::move(edges);
    std::sort(job.edges.begin(), job.edges.end());
    return job;
}

inline ExecutorState make_executor(int id, std::optional<int> bound = std::nullopt) {
    return {id, bound, 0.0};
}

inline std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("schedlens_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline JobDag random_job(std::mt19937_64& rng, int id, const DagShapeParams& shape = {}) {
    return schedlens::detail::random_dag(rng, id, 0.0, shape);
}

// Legally advances a fresh state: schedules ready replicates and completes a
// random subset of the scheduled ones, leaving at least one node unfinished.
inline void advance_randomly(JobRuntimeState& state, std::mt19937_64& rng, int steps,
                             double& now) {
    std::vector<int> in_flight(static_cast<std::size_t>(state.node_count()), 0);
    for (int step = 0; step < steps; ++step) {
        const bool can_schedule = state.has_ready_node();
        std::vector<int> flying;
        for (int n = 0; n < state.node_count(); ++n)
            if (in_flight[static_cast<std::size_t>(n)] > 0) flying.push_back(n);

        if (can_schedule && (flying.empty() || uniform_unit(rng) < 0.5)) {
            const auto ready = ready_nodes(state);
            const int n = ready[static_cast<std::size_t>(
                uniform_int(rng, 0, static_cast<std::int64_t>(ready.size()) - 1))];
            state.schedule_replicate(n);
            ++in_flight[static_cast<std::size_t>(n)];
        } else if (!flying.empty()) {
            const int n = flying[static_cast<std::size_t>(
                uniform_int(rng, 0, static_cast<std::int64_t>(flying.size()) - 1))];
            // keep at least one unfinished replicate in the whole job
            std::int64_t unfinished = 0;
            for (int v = 0; v < state.node_count(); ++v) unfinished += state.tasks_unfinished(v);
            if (unfinished <= 1) break;
            now += 1.0;
            state.complete_replicate(n, now);
            --in_flight[static_cast<std::size_t>(n)];
        }
    }
}

}  // namespace test_helpers
