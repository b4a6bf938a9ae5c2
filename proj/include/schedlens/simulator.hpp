#pragma once

#include <cmath>
#include <limits>
#include <queue>

#include "schedlens/policy.hpp"
#include "schedlens/trace.hpp"

namespace schedlens {

struct SimConfig {
    // Cold-start penalty added to a replicate's run time whenever the
    // executor's last-served job differs from the assigned one.
    double warmup_delay = 3.0;
};

struct Metrics {
    double avg_jct = 0.0;
    double time_avg_jobs = 0.0;
};

struct SimResult {
    Trace trace;
    Metrics metrics;
};

namespace detail {

struct CompletionEvent {
    double time = 0.0;
    int executor = 0;
    int job = 0;
    int node = 0;
};

struct CompletionLater {
    bool operator()(const CompletionEvent& a, const CompletionEvent& b) const {
        return std::tie(a.time, a.executor) > std::tie(b.time, b.executor);
    }
};

using CompletionQueue =
    std::priority_queue<CompletionEvent, std::vector<CompletionEvent>, CompletionLater>;

inline void check_workload(const Workload& w) {
    if (w.jobs.empty()) throw std::invalid_argument("simulate: empty workload");
    for (std::size_t i = 0; i < w.jobs.size(); ++i) {
        const auto violations = validate_dag(w.jobs[i]);
        if (!violations.empty()) throw std::runtime_error("simulate: " + violations.front());
        if (i > 0 && w.jobs[i].arrival_time < w.jobs[i - 1].arrival_time)
            throw std::runtime_error("simulate: arrival times are not non-decreasing");
    }
}

}  // namespace detail

// Discrete-event simulation of executor-monopoly scheduling. The policy is
// invoked once per free executor whenever some job has a ready node; each
// invocation assigns exactly one task replicate. Event order at equal times:
// completions, then arrivals, then invocations; executors by ascending id.
inline SimResult simulate(const Workload& workload, int n_executors, Policy& policy,
                          const SimConfig& cfg = {}) {
    detail::check_workload(workload);
    if (n_executors < 1) throw std::invalid_argument("simulate: n_executors must be >= 1");

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<ExecutorState> executors(static_cast<std::size_t>(n_executors));
    std::vector<char> exec_free(static_cast<std::size_t>(n_executors), 1);
    for (int e = 0; e < n_executors; ++e) executors[static_cast<std::size_t>(e)].id = e;

    std::map<int, JobRuntimeState> active;  // arrived and unfinished, by job id
    std::map<int, double> arrivals_seen;
    detail::CompletionQueue pending;
    std::size_t next_arrival = 0;
    std::size_t finished = 0;
    int in_system = 0;
    int stage = 0;
    Trace trace;

    const auto record_step = [&](double t) {
        if (trace.jobs_in_system.empty() ? in_system != 0
                                         : trace.jobs_in_system.back().second != in_system)
            trace.jobs_in_system.emplace_back(t, in_system);
    };

    while (finished < workload.jobs.size()) {
        const double t_completion = pending.empty() ? kInf : pending.top().time;
        const double t_arrival =
            next_arrival < workload.jobs.size() ? workload.jobs[next_arrival].arrival_time : kInf;
        const double now = std::min(t_completion, t_arrival);
        if (now == kInf) throw std::logic_error("simulate: stalled with unfinished jobs");

        while (!pending.empty() && pending.top().time == now) {
            const auto ev = pending.top();
            pending.pop();
            exec_free[static_cast<std::size_t>(ev.executor)] = 1;
            auto it = active.find(ev.job);
            it->second.complete_replicate(ev.node, now);
            if (it->second.finished()) {
                trace.completions[ev.job] = {arrivals_seen.at(ev.job), now};
                active.erase(it);
                --in_system;
                ++finished;
            }
        }
        while (next_arrival < workload.jobs.size() &&
               workload.jobs[next_arrival].arrival_time == now) {
            const JobDag& job = workload.jobs[next_arrival];
            active.emplace(job.id, JobRuntimeState(job, now));
            arrivals_seen[job.id] = now;
            ++in_system;
            ++next_arrival;
        }
        record_step(now);

        for (int e = 0; e < n_executors; ++e) {
            if (!exec_free[static_cast<std::size_t>(e)]) continue;
            std::vector<const JobRuntimeState*> candidates;
            for (const auto& [id, state] : active)
                if (state.has_ready_node()) candidates.push_back(&state);
            if (candidates.empty()) break;  // nothing ready for any executor

            ExecutorState& exec = executors[static_cast<std::size_t>(e)];
            Decision d;
            d.stage = stage++;
            d.time = now;
            d.executor = e;
            for (const auto* c : candidates)
                d.candidates.push_back({c->id(), extract_features(*c, exec)});

            const NodeChoice choice = policy.decide(candidates, exec, now);
            auto it = active.find(choice.job);
            if (it == active.end())
                throw std::logic_error("simulate: policy chose a job outside the candidate set");
            d.chosen_job = choice.job;
            d.chosen_node = choice.node;
            it->second.schedule_replicate(choice.node);

            const bool cold = !exec.bound_job || *exec.bound_job != choice.job;
            const double duration = it->second.job().nodes[static_cast<std::size_t>(choice.node)]
                                        .per_task_duration +
                                    (cold ? cfg.warmup_delay : 0.0);
            exec.bound_job = choice.job;
            exec.busy_until = now + duration;
            exec_free[static_cast<std::size_t>(e)] = 0;
            pending.push({now + duration, e, choice.job, choice.node});
            trace.decisions.push_back(std::move(d));
        }
    }

    Metrics metrics;
    for (const auto& [id, c] : trace.completions) metrics.avg_jct += c.finish - c.arrival;
    metrics.avg_jct /= static_cast<double>(trace.completions.size());
    metrics.time_avg_jobs = time_averaged_jobs(trace);
    return {std::move(trace), metrics};
}

inline SimResult simulate(const Workload& workload, int n_executors, const PolicyRef& ref,
                          const SimConfig& cfg = {}) {
    Policy policy(ref);
    return simulate(workload, n_executors, policy, cfg);
}

struct ReplayEvent {
    const Decision& decision;
    const JobRuntimeState& chosen_state;  // state before the decision is applied
    const ExecutorState& executor;        // likewise
};

// Re-derives runtime state along a recorded trace by treating its decisions
// as the policy. Works for traces of external schedulers too, as long as the
// workload and warmup config match; inconsistencies raise errors.
inline void replay_trace(const Workload& workload, const Trace& trace, const SimConfig& cfg,
                         const std::function<void(const ReplayEvent&)>& visit) {
    detail::check_workload(workload);
    int max_exec = 0;
    for (const auto& d : trace.decisions) max_exec = std::max(max_exec, d.executor);
    std::vector<ExecutorState> executors(static_cast<std::size_t>(max_exec) + 1);
    for (std::size_t e = 0; e < executors.size(); ++e) executors[e].id = static_cast<int>(e);

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::map<int, JobRuntimeState> active;
    std::map<int, CompletionRecord> completions;
    std::map<int, double> arrivals_seen;
    detail::CompletionQueue pending;
    std::size_t next_arrival = 0;

    const auto process_until = [&](double limit) {
        while (!pending.empty() || next_arrival < workload.jobs.size()) {
            const double t_completion = pending.empty() ? kInf : pending.top().time;
            const double t_arrival = next_arrival < workload.jobs.size()
                                         ? workload.jobs[next_arrival].arrival_time
                                         : kInf;
            const double t = std::min(t_completion, t_arrival);
            if (t > limit) break;
            if (t_completion <= t_arrival) {
                const auto ev = pending.top();
                pending.pop();
                auto it = active.find(ev.job);
                it->second.complete_replicate(ev.node, t);
                if (it->second.finished()) {
                    completions[ev.job] = {arrivals_seen.at(ev.job), t};
                    active.erase(it);
                }
            } else {
                const JobDag& job = workload.jobs[next_arrival];
                active.emplace(job.id, JobRuntimeState(job, t));
                arrivals_seen[job.id] = t;
                ++next_arrival;
            }
        }
    };

    for (const auto& d : trace.decisions) {
        process_until(d.time);
        auto it = active.find(d.chosen_job);
        if (it == active.end())
            throw std::runtime_error("replay: stage " + std::to_string(d.stage) + " chooses job " +
                                     std::to_string(d.chosen_job) + " which is not in the system");
        ExecutorState& exec = executors[static_cast<std::size_t>(d.executor)];
        if (exec.busy_until > d.time + 1e-9)
            throw std::runtime_error("replay: executor " + std::to_string(d.executor) +
                                     " is still busy at stage " + std::to_string(d.stage) +
                                     " (check workload/warmup)");
        visit({d, it->second, exec});

        it->second.schedule_replicate(d.chosen_node);  // throws if the node is not ready
        const bool cold = !exec.bound_job || *exec.bound_job != d.chosen_job;
        const double duration =
            it->second.job().nodes[static_cast<std::size_t>(d.chosen_node)].per_task_duration +
            (cold ? cfg.warmup_delay : 0.0);
        exec.bound_job = d.chosen_job;
        exec.busy_until = d.time + duration;
        pending.push({d.time + duration, d.executor, d.chosen_job, d.chosen_node});
    }
    process_until(kInf);

    // Cross-check against the recorded completions: a mismatch means the
    // workload or warmup config does not belong to this trace.
    for (const auto& [id, rec] : trace.completions) {
        const auto it = completions.find(id);
        if (it == completions.end())
            throw std::runtime_error("replay: job " + std::to_string(id) + " never completed");
        if (std::abs(it->second.finish - rec.finish) > 1e-6)
            throw std::runtime_error("replay: completion time of job " + std::to_string(id) +
                                     " diverges from the trace (check workload/warmup)");
    }
}

}  // namespace schedlens
