#pragma once

#include <charconv>
#include <sstream>

#include "schedlens/trace.hpp"

namespace schedlens {

namespace detail {

// Shortest round-trip decimal form, so re-serialized files are byte-stable.
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error("bad numeric field: '" + s + "'");
    return v;
}

}  // namespace detail

// One candidate job at one decision stage; per stage exactly one is positive.
struct LabeledInstance {
    int stage = 0;
    int job = 0;
    FeatureVector features;
    bool positive = false;

    bool operator==(const LabeledInstance&) const = default;
};

// One instance per (stage, candidate); the chosen job is the positive one.
inline std::vector<LabeledInstance> build_stage_dataset(const Trace& trace) {
    std::vector<LabeledInstance> out;
    for (const auto& d : trace.decisions)
        for (const auto& c : d.candidates)
            out.push_back({d.stage, c.job, c.features, c.job == d.chosen_job});
    return out;
}

inline constexpr const char* kDatasetCsvHeader = "stage,job,f0,f1,f2,f3,f4,f5,f6,label";

inline void save_dataset_csv(const std::vector<LabeledInstance>& instances,
                             const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << kDatasetCsvHeader << '\n';
    for (const auto& inst : instances) {
        const auto& f = inst.features;
        out << inst.stage << ',' << inst.job << ',' << detail::format_double(f.cp_runtime) << ','
            << f.cp_tasks << ',' << detail::format_double(f.job_runtime) << ',' << f.job_tasks
            << ',' << detail::format_double(f.srn_runtime) << ',' << f.srn_tasks << ','
            << (f.locality ? 1 : 0) << ',' << (inst.positive ? 1 : 0) << '\n';
    }
}

inline std::vector<LabeledInstance> load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("stage,job,", 0) != 0)
        throw std::runtime_error(path + ": missing dataset header");
    std::vector<LabeledInstance> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 10)
            throw std::runtime_error(path + ": expected 10 fields, got " +
                                     std::to_string(fields.size()));
        LabeledInstance inst;
        inst.stage = static_cast<int>(detail::parse_double(fields[0]));
        inst.job = static_cast<int>(detail::parse_double(fields[1]));
        std::array<double, 7> a{};
        for (int i = 0; i < 7; ++i) a[i] = detail::parse_double(fields[2 + i]);
        inst.features = FeatureVector::from_array(a);
        inst.positive = detail::parse_double(fields[9]) != 0.0;
        out.push_back(inst);
    }
    return out;
}

// Shifts stage ids by a fixed offset; used when concatenating datasets from
// several traces so stages stay globally unique.
inline std::vector<LabeledInstance> offset_stages(std::vector<LabeledInstance> instances,
                                                  int offset) {
    for (auto& inst : instances) inst.stage += offset;
    return instances;
}

}  // namespace schedlens
