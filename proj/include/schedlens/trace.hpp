#pragma once

#include <map>
#include <string>
#include <vector>

#include "schedlens/features.hpp"

namespace schedlens {

struct CandidateRecord {
    int job = 0;
    FeatureVector features;

    bool operator==(const CandidateRecord&) const = default;
};

// One scheduler invocation: every candidate job with its features, plus the
// (job, node) the policy picked. Exactly one candidate is the positive one.
struct Decision {
    int stage = 0;
    double time = 0.0;
    int executor = 0;
    std::vector<CandidateRecord> candidates;  // sorted by job id
    int chosen_job = 0;
    int chosen_node = 0;

    const FeatureVector& chosen_features() const {
        for (const auto& c : candidates)
            if (c.job == chosen_job) return c.features;
        throw std::logic_error("decision: chosen job missing from candidates");
    }

    bool operator==(const Decision&) const = default;
};

struct CompletionRecord {
    double arrival = 0.0;
    double finish = 0.0;

    bool operator==(const CompletionRecord&) const = default;
};

struct Trace {
    std::vector<Decision> decisions;              // sorted by (time, stage)
    std::map<int, CompletionRecord> completions;  // job id -> (arrival, finish)
    std::vector<std::pair<double, int>> jobs_in_system;  // coalesced step function

    bool operator==(const Trace&) const = default;
};

// Canonical jobs-in-system step function from arrival/finish pairs: points
// only where the count changes, net of simultaneous events.
inline std::vector<std::pair<double, int>> jobs_in_system_steps(
    const std::map<int, CompletionRecord>& completions) {
    std::vector<std::pair<double, int>> events;
    for (const auto& [id, c] : completions) {
        events.emplace_back(c.arrival, +1);
        events.emplace_back(c.finish, -1);
    }
    std::sort(events.begin(), events.end());
    std::vector<std::pair<double, int>> steps;
    int count = 0;
    std::size_t i = 0;
    while (i < events.size()) {
        const double t = events[i].first;
        while (i < events.size() && events[i].first == t) count += events[i++].second;
        if (steps.empty() ? count != 0 : steps.back().second != count)
            steps.emplace_back(t, count);
    }
    return steps;
}

// Time average of the jobs-in-system step function over [0, t_T], where t_T
// is the latest job finish (falls back to the last step time for traces with
// no completions).
inline double time_averaged_jobs(const Trace& trace) {
    double t_end = 0.0;
    for (const auto& [id, c] : trace.completions) t_end = std::max(t_end, c.finish);
    if (trace.completions.empty() && !trace.jobs_in_system.empty())
        t_end = trace.jobs_in_system.back().first;
    if (!(t_end > 0)) throw std::invalid_argument("time_averaged_jobs: zero-length horizon");

    double acc = 0.0;
    const auto& steps = trace.jobs_in_system;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const double t0 = std::min(steps[i].first, t_end);
        const double t1 = std::min(i + 1 < steps.size() ? steps[i + 1].first : t_end, t_end);
        if (t1 > t0) acc += (t1 - t0) * steps[i].second;
    }
    return acc / t_end;
}

inline ojson decision_to_json(const Decision& d) {
    ojson j;
    j["stage"] = d.stage;
    j["time"] = d.time;
    j["executor"] = d.executor;
    j["chosen_job"] = d.chosen_job;
    j["chosen_node"] = d.chosen_node;
    j["candidates"] = ojson::array();
    for (const auto& c : d.candidates) {
        ojson cj;
        cj["job"] = c.job;
        cj["features"] = c.features.as_array();
        j["candidates"].push_back(std::move(cj));
    }
    return j;
}

inline Decision decision_from_json(const ojson& j) {
    Decision d;
    d.stage = j.at("stage").get<int>();
    d.time = j.at("time").get<double>();
    d.executor = j.at("executor").get<int>();
    d.chosen_job = j.at("chosen_job").get<int>();
    d.chosen_node = j.at("chosen_node").get<int>();
    for (const auto& cj : j.at("candidates")) {
        CandidateRecord c;
        c.job = cj.at("job").get<int>();
        const auto& fa = cj.at("features");
        if (fa.size() != 7)
            throw std::runtime_error("trace: candidate feature array must have 7 entries");
        std::array<double, 7> a{};
        for (std::size_t i = 0; i < 7; ++i) a[i] = fa.at(i).get<double>();
        c.features = FeatureVector::from_array(a);
        d.candidates.push_back(std::move(c));
    }
    return d;
}

// JSON Lines: one decision per line plus a {"completions": ...} trailer.
inline void save_trace_jsonl(const Trace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& d : trace.decisions) out << decision_to_json(d).dump() << '\n';
    ojson trailer;
    trailer["completions"] = ojson::object();
    for (const auto& [id, c] : trace.completions)
        trailer["completions"][std::to_string(id)] = ojson::array({c.arrival, c.finish});
    out << trailer.dump() << '\n';
}

// Tolerant loader shared with the external-trace import path: sorts and
// validates decisions, then rebuilds the step function from the trailer.
inline Trace load_trace_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    Trace trace;
    bool saw_trailer = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const ojson j = ojson::parse(line);
        if (j.contains("completions")) {
            if (saw_trailer) throw std::runtime_error(path + ": multiple completion trailers");
            saw_trailer = true;
            for (const auto& [key, val] : j.at("completions").items()) {
                CompletionRecord c{val.at(0).get<double>(), val.at(1).get<double>()};
                if (c.finish < c.arrival)
                    throw std::runtime_error(path + ": job " + key + " finishes before arrival");
                trace.completions[std::stoi(key)] = c;
            }
            continue;
        }
        Decision d = decision_from_json(j);
        std::sort(d.candidates.begin(), d.candidates.end(),
                  [](const CandidateRecord& a, const CandidateRecord& b) { return a.job < b.job; });
        int chosen_count = 0;
        for (std::size_t i = 0; i < d.candidates.size(); ++i) {
            if (i > 0 && d.candidates[i].job == d.candidates[i - 1].job)
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": duplicate candidate job");
            if (d.candidates[i].job == d.chosen_job) ++chosen_count;
        }
        if (chosen_count != 1)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": chosen job must appear exactly once among candidates");
        trace.decisions.push_back(std::move(d));
    }
    if (!saw_trailer) throw std::runtime_error(path + ": missing completions trailer");
    std::sort(trace.decisions.begin(), trace.decisions.end(),
              [](const Decision& a, const Decision& b) {
                  return std::tie(a.time, a.stage) < std::tie(b.time, b.stage);
              });
    for (std::size_t i = 0; i + 1 < trace.decisions.size(); ++i)
        if (trace.decisions[i].stage == trace.decisions[i + 1].stage)
            throw std::runtime_error(path + ": duplicate stage id " +
                                     std::to_string(trace.decisions[i].stage));
    trace.jobs_in_system = jobs_in_system_steps(trace.completions);
    return trace;
}

}  // namespace schedlens
