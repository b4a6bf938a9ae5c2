#pragma once

#include "schedlens/simulator.hpp"
#include "schedlens/tree.hpp"

namespace schedlens {

// Per-branch agreement between each classical rule's node choice and the
// recorded one, given the recorded job choice.
struct AlignmentReport {
    std::string branch;
    double snf = 0.0;
    double cps = 0.0;
    double fcfs = 0.0;
    std::string best;  // "snf" | "cps" | "fcfs"
    std::int64_t decisions = 0;

    double accuracy(TaskRule rule) const {
        switch (rule) {
            case TaskRule::Snf: return snf;
            case TaskRule::Cps: return cps;
            case TaskRule::Fcfs: return fcfs;
        }
        return 0.0;
    }
};

using BranchAssigner = std::function<std::string(const Decision&)>;

inline BranchAssigner single_branch() {
    return [](const Decision&) { return std::string("all"); };
}

// Assigns each decision to a side of the job-level tree's root split, judged
// on the positive instance's features ("f6<=0.5" vs "f6>0.5" for a
// locality-rooted tree).
inline BranchAssigner branch_by_tree_root(const DecisionTree& tree) {
    return [tree](const Decision& d) {
        return root_branch_label(tree, d.chosen_features().as_array());
    };
}

// Replays the trace against its workload and scores SNF/CPS/FCFS per branch.
// Branches with zero decisions are omitted; reports sort by branch label.
inline std::vector<AlignmentReport> align_rules(const Workload& workload, const Trace& trace,
                                                const SimConfig& cfg,
                                                const BranchAssigner& branch_of) {
    struct Tally {
        std::int64_t total = 0;
        std::int64_t matches[3] = {0, 0, 0};
    };
    std::map<std::string, Tally> tallies;
    constexpr TaskRule kRules[] = {TaskRule::Snf, TaskRule::Cps, TaskRule::Fcfs};

    replay_trace(workload, trace, cfg, [&](const ReplayEvent& ev) {
        Tally& tally = tallies[branch_of(ev.decision)];
        ++tally.total;
        for (std::size_t r = 0; r < 3; ++r)
            if (rule_choice(kRules[r], ev.chosen_state) == ev.decision.chosen_node)
                ++tally.matches[r];
    });

    std::vector<AlignmentReport> out;
    for (const auto& [branch, tally] : tallies) {
        AlignmentReport report;
        report.branch = branch;
        report.decisions = tally.total;
        report.snf = static_cast<double>(tally.matches[0]) / static_cast<double>(tally.total);
        report.cps = static_cast<double>(tally.matches[1]) / static_cast<double>(tally.total);
        report.fcfs = static_cast<double>(tally.matches[2]) / static_cast<double>(tally.total);
        report.best = "snf";
        double best_acc = report.snf;
        if (report.cps > best_acc) {
            report.best = "cps";
            best_acc = report.cps;
        }
        if (report.fcfs > best_acc) report.best = "fcfs";
        out.push_back(std::move(report));
    }
    return out;
}

inline ojson alignment_to_json(const std::vector<AlignmentReport>& reports) {
    ojson out = ojson::array();
    for (const auto& r : reports) {
        ojson j;
        j["branch"] = r.branch;
        j["accuracy"] = ojson::object();
        j["accuracy"]["snf"] = r.snf;
        j["accuracy"]["cps"] = r.cps;
        j["accuracy"]["fcfs"] = r.fcfs;
        j["best"] = r.best;
        j["decisions"] = r.decisions;
        out.push_back(std::move(j));
    }
    return out;
}

inline void save_alignment(const std::vector<AlignmentReport>& reports, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << alignment_to_json(reports).dump(2) << '\n';
}

}  // namespace schedlens
