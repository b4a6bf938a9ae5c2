#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "schedlens/workload.hpp"

namespace schedlens {

struct ExecutorState {
    int id = 0;
    std::optional<int> bound_job;  // job whose task this executor last ran
    double busy_until = 0.0;
};

// Mutable progress of one job inside a simulation. A node is READY when every
// parent has no unfinished replicates and the node itself still has
// unscheduled ones.
class JobRuntimeState {
public:
    JobRuntimeState(const JobDag& job, double now)
        : job_(&job),
          tasks_remaining_(job.nodes.size()),
          tasks_unfinished_(job.nodes.size()),
          ready_since_(job.nodes.size(), kNotReady),
          parents_(job.nodes.size()),
          children_(job.nodes.size()) {
        for (std::size_t i = 0; i < job.nodes.size(); ++i) {
            tasks_remaining_[i] = tasks_unfinished_[i] = job.nodes[i].num_tasks;
            unfinished_total_ += job.nodes[i].num_tasks;
        }
        for (const auto& [p, c] : job.edges) {
            parents_[c].push_back(p);
            children_[p].push_back(c);
        }
        for (int n = 0; n < node_count(); ++n)
            if (parents_[n].empty()) ready_since_[n] = now;
    }

    const JobDag& job() const { return *job_; }
    int id() const { return job_->id; }
    int node_count() const { return static_cast<int>(job_->nodes.size()); }

    int tasks_remaining(int node) const { return tasks_remaining_[node]; }
    int tasks_unfinished(int node) const { return tasks_unfinished_[node]; }
    bool node_finished(int node) const { return tasks_unfinished_[node] == 0; }
    bool finished() const { return unfinished_total_ == 0; }

    double node_remaining_runtime(int node) const {
        return tasks_unfinished_[node] * job_->nodes[node].per_task_duration;
    }

    bool parents_done(int node) const {
        for (int p : parents_[node])
            if (tasks_unfinished_[p] != 0) return false;
        return true;
    }

    bool node_ready(int node) const {
        return tasks_remaining_[node] > 0 && parents_done(node);
    }

    bool has_ready_node() const {
        for (int n = 0; n < node_count(); ++n)
            if (node_ready(n)) return true;
        return false;
    }

    // Time the node first had all dependencies resolved; empty until then.
    std::optional<double> node_ready_time(int node) const {
        if (ready_since_[node] == kNotReady) return std::nullopt;
        return ready_since_[node];
    }

    const std::vector<int>& parents(int node) const { return parents_[node]; }
    const std::vector<int>& children(int node) const { return children_[node]; }

    void schedule_replicate(int node) {
        if (node < 0 || node >= node_count() || !node_ready(node))
            throw std::runtime_error("schedule_replicate: node " + std::to_string(node) +
                                     " of job " + std::to_string(id()) + " is not ready");
        --tasks_remaining_[node];
    }

    // Finishes one replicate; newly ready children get their ready time
    // stamped. Returns true when this completed the whole node.
    bool complete_replicate(int node, double now) {
        if (node < 0 || node >= node_count() || tasks_unfinished_[node] <= 0)
            throw std::logic_error("complete_replicate: no unfinished replicate on node " +
                                   std::to_string(node));
        --tasks_unfinished_[node];
        --unfinished_total_;
        if (tasks_unfinished_[node] != 0) return false;
        for (int c : children_[node])
            if (ready_since_[c] == kNotReady && parents_done(c)) ready_since_[c] = now;
        return true;
    }

private:
    static constexpr double kNotReady = -1.0;

    const JobDag* job_;
    std::vector<int> tasks_remaining_;
    std::vector<int> tasks_unfinished_;
    std::vector<double> ready_since_;
    std::vector<std::vector<int>> parents_;
    std::vector<std::vector<int>> children_;
    std::int64_t unfinished_total_ = 0;
};

// Node ids satisfying the READY predicate, ascending.
inline std::vector<int> ready_nodes(const JobRuntimeState& state) {
    std::vector<int> out;
    for (int n = 0; n < state.node_count(); ++n)
        if (state.node_ready(n)) out.push_back(n);
    return out;
}

}  // namespace schedlens
