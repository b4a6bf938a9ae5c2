#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "schedlens/rng.hpp"

namespace schedlens {

using ojson = nlohmann::ordered_json;

// A stage of a job: num_tasks homogeneous replicates of per_task_duration each.
struct TaskNode {
    int id = 0;
    int num_tasks = 1;
    double per_task_duration = 1.0;  // seconds

    // Sequential-execution estimate of the node's total work.
    double runtime() const { return num_tasks * per_task_duration; }

    bool operator==(const TaskNode&) const = default;
};

struct JobDag {
    int id = 0;
    double arrival_time = 0.0;
    std::vector<TaskNode> nodes;                // ids contiguous 0..n-1
    std::vector<std::pair<int, int>> edges;     // (parent, child), sorted

    std::int64_t total_tasks() const {
        std::int64_t n = 0;
        for (const auto& nd : nodes) n += nd.num_tasks;
        return n;
    }
    double total_runtime() const {
        double r = 0;
        for (const auto& nd : nodes) r += nd.runtime();
        return r;
    }

    bool operator==(const JobDag&) const = default;
};

struct Workload {
    std::uint64_t seed = 0;
    std::vector<JobDag> jobs;  // sorted by arrival_time

    bool operator==(const Workload&) const = default;
};

struct DagShapeParams {
    int min_nodes = 2;
    int max_nodes = 10;
    int min_tasks = 1;
    int max_tasks = 50;
    double min_duration = 0.5;   // seconds per task
    double max_duration = 20.0;
};

// Returns human-readable violations; empty iff the job is a well-formed DAG
// with contiguous node ids and positive task counts/durations.
inline std::vector<std::string> validate_dag(const JobDag& job) {
    std::vector<std::string> out;
    const int n = static_cast<int>(job.nodes.size());
    if (n == 0) {
        out.push_back("job " + std::to_string(job.id) + ": has no nodes");
        return out;
    }
    for (int i = 0; i < n; ++i) {
        if (job.nodes[i].id != i) {
            out.push_back("job " + std::to_string(job.id) + ": node ids are not contiguous 0..n-1");
            break;
        }
    }
    for (const auto& nd : job.nodes) {
        if (nd.num_tasks < 1)
            out.push_back("job " + std::to_string(job.id) + ": node " + std::to_string(nd.id) +
                          ": num_tasks < 1");
        if (!(nd.per_task_duration > 0))
            out.push_back("job " + std::to_string(job.id) + ": node " + std::to_string(nd.id) +
                          ": per_task_duration <= 0");
    }
    bool endpoints_ok = true;
    for (const auto& [p, c] : job.edges) {
        if (p < 0 || p >= n || c < 0 || c >= n) {
            out.push_back("job " + std::to_string(job.id) + ": edge (" + std::to_string(p) + "," +
                          std::to_string(c) + ") references an unknown node");
            endpoints_ok = false;
        }
    }
    if (endpoints_ok) {
        // Kahn's algorithm; leftover nodes mean a cycle.
        std::vector<int> indeg(n, 0);
        std::vector<std::vector<int>> children(n);
        for (const auto& [p, c] : job.edges) {
            ++indeg[c];
            children[p].push_back(c);
        }
        std::vector<int> queue;
        for (int i = 0; i < n; ++i)
            if (indeg[i] == 0) queue.push_back(i);
        int seen = 0;
        while (!queue.empty()) {
            const int v = queue.back();
            queue.pop_back();
            ++seen;
            for (int c : children[v])
                if (--indeg[c] == 0) queue.push_back(c);
        }
        if (seen != n)
            out.push_back("job " + std::to_string(job.id) + ": dependency cycle detected");
    }
    return out;
}

namespace detail {

// Layered random DAG: nodes are partitioned into levels and edges only go
// from a level to a later one, so node ids are already topologically sorted.
inline JobDag random_dag(std::mt19937_64& rng, int job_id, double arrival,
                         const DagShapeParams& shape) {
    const int n_nodes = static_cast<int>(uniform_int(rng, shape.min_nodes, shape.max_nodes));
    const int n_levels = static_cast<int>(uniform_int(rng, 1, n_nodes));
    std::vector<int> level(n_nodes);
    for (int i = 0; i < n_levels; ++i) level[i] = i;  // keep every level non-empty
    for (int i = n_levels; i < n_nodes; ++i)
        level[i] = static_cast<int>(uniform_int(rng, 0, n_levels - 1));
    std::sort(level.begin(), level.end());

    JobDag job;
    job.id = job_id;
    job.arrival_time = arrival;
    for (int i = 0; i < n_nodes; ++i) {
        TaskNode nd;
        nd.id = i;
        nd.num_tasks = static_cast<int>(uniform_int(rng, shape.min_tasks, shape.max_tasks));
        nd.per_task_duration = uniform_real(rng, shape.min_duration, shape.max_duration);
        job.nodes.push_back(nd);
    }
    for (int v = 0; v < n_nodes; ++v) {
        if (level[v] == 0) continue;
        const int n_earlier = static_cast<int>(
            std::lower_bound(level.begin(), level.end(), level[v]) - level.begin());
        const int n_parents =
            static_cast<int>(uniform_int(rng, 1, std::min<std::int64_t>(2, n_earlier)));
        const int p0 = static_cast<int>(uniform_int(rng, 0, n_earlier - 1));
        job.edges.emplace_back(p0, v);
        if (n_parents == 2) {
            int p1 = p0;
            while (p1 == p0) p1 = static_cast<int>(uniform_int(rng, 0, n_earlier - 1));
            job.edges.emplace_back(p1, v);
        }
    }
    std::sort(job.edges.begin(), job.edges.end());
    return job;
}

}  // namespace detail

// Jobs arrive by a Poisson process (i.i.d. exponential gaps); the first
// arrival is anchored at t=0. Pure function of its arguments.
inline Workload generate_workload(std::uint64_t seed, int n_jobs, double mean_interarrival,
                                  const DagShapeParams& shape = {}) {
    if (n_jobs < 1) throw std::invalid_argument("generate_workload: n_jobs must be >= 1");
    if (!(mean_interarrival > 0))
        throw std::invalid_argument("generate_workload: mean_interarrival must be > 0");
    if (shape.min_nodes < 1 || shape.min_nodes > shape.max_nodes || shape.min_tasks < 1 ||
        shape.min_tasks > shape.max_tasks || !(shape.min_duration > 0) ||
        shape.min_duration > shape.max_duration)
        throw std::invalid_argument("generate_workload: invalid shape bounds");

    std::mt19937_64 rng(seed);
    Workload w;
    w.seed = seed;
    double arrival = 0.0;
    for (int j = 0; j < n_jobs; ++j) {
        if (j > 0) arrival += exponential(rng, mean_interarrival);
        w.jobs.push_back(detail::random_dag(rng, j, arrival, shape));
    }
    return w;
}

inline ojson workload_to_json(const Workload& w) {
    ojson root;
    root["seed"] = w.seed;
    root["jobs"] = ojson::array();
    for (const auto& job : w.jobs) {
        ojson j;
        j["id"] = job.id;
        j["arrival_time"] = job.arrival_time;
        j["nodes"] = ojson::array();
        for (const auto& nd : job.nodes) {
            ojson n;
            n["id"] = nd.id;
            n["num_tasks"] = nd.num_tasks;
            n["per_task_duration"] = nd.per_task_duration;
            j["nodes"].push_back(std::move(n));
        }
        j["edges"] = ojson::array();
        for (const auto& [p, c] : job.edges) j["edges"].push_back(ojson::array({p, c}));
        root["jobs"].push_back(std::move(j));
    }
    return root;
}

inline Workload workload_from_json(const ojson& root) {
    Workload w;
    w.seed = root.at("seed").get<std::uint64_t>();
    for (const auto& j : root.at("jobs")) {
        JobDag job;
        job.id = j.at("id").get<int>();
        job.arrival_time = j.at("arrival_time").get<double>();
        for (const auto& n : j.at("nodes")) {
            TaskNode nd;
            nd.id = n.at("id").get<int>();
            nd.num_tasks = n.at("num_tasks").get<int>();
            nd.per_task_duration = n.at("per_task_duration").get<double>();
            job.nodes.push_back(nd);
        }
        for (const auto& e : j.at("edges"))
            job.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        std::sort(job.edges.begin(), job.edges.end());
        const auto violations = validate_dag(job);
        if (!violations.empty()) {
            std::string msg = "invalid job DAG:";
            for (const auto& v : violations) msg += " " + v + ";";
            throw std::runtime_error(msg);
        }
        w.jobs.push_back(std::move(job));
    }
    std::sort(w.jobs.begin(), w.jobs.end(), [](const JobDag& a, const JobDag& b) {
        return std::tie(a.arrival_time, a.id) < std::tie(b.arrival_time, b.id);
    });
    for (std::size_t i = 0; i + 1 < w.jobs.size(); ++i)
        if (w.jobs[i].id == w.jobs[i + 1].id)
            throw std::runtime_error("workload: duplicate job id " + std::to_string(w.jobs[i].id));
    return w;
}

inline void save_workload(const Workload& w, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << workload_to_json(w).dump(2) << '\n';
}

inline Workload load_workload(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return workload_from_json(ojson::parse(in));
}

}  // namespace schedlens
