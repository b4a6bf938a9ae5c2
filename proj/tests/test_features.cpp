#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace schedlens;
using test_helpers::make_executor;
using test_helpers::make_job;

TEST_CASE("critical path of a single node is the node itself") {
    const auto job = make_job(0, 0.0, {{5, 2.0}});
    JobRuntimeState state(job, 0.0);
    const auto cp = critical_path(state);
    CHECK(cp.nodes == std::vector<int>{0});
    CHECK(cp.runtime == doctest::Approx(10.0));
    CHECK(cp.tasks == 5);
}

TEST_CASE("critical path picks the heaviest chain of a diamond") {
    // runtimes 0:1, 1:5, 2:2, 3:1
    const auto job = make_job(0, 0.0, {{1, 1.0}, {5, 1.0}, {2, 1.0}, {1, 1.0}},
                              {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    JobRuntimeState state(job, 0.0);
    const auto cp = critical_path(state);
    CHECK(cp.nodes == std::vector<int>{0, 1, 3});
    CHECK(cp.runtime == doctest::Approx(7.0));
    CHECK(cp.tasks == 7);
}

TEST_CASE("critical path chains across finished nodes") {
    const auto job = make_job(0, 0.0, {{2, 3.0}, {1, 1.0}, {4, 2.0}}, {{0, 1}, {1, 2}});
    JobRuntimeState state(job, 0.0);
    state.schedule_replicate(0);
    state.schedule_replicate(0);
    state.complete_replicate(0, 1.0);
    state.complete_replicate(0, 2.0);
    state.schedule_replicate(1);
    state.complete_replicate(1, 3.0);  // middle node done; 0 and 2 not connected directly
    const auto cp = critical_path(state);
    CHECK(cp.nodes == std::vector<int>{2});
    CHECK(cp.runtime == doctest::Approx(8.0));

    // now only node 0 partially remains unfinished
    JobRuntimeState mid(job, 0.0);
    mid.schedule_replicate(0);
    mid.complete_replicate(0, 1.0);
    const auto cp_mid = critical_path(mid);
    CHECK(cp_mid.runtime == doctest::Approx(3.0 + 1.0 + 8.0));
    CHECK(cp_mid.nodes == std::vector<int>{0, 1, 2});
}

TEST_CASE("critical path equals exhaustive chain enumeration") {
    std::mt19937_64 rng(404);
    DagShapeParams shape;
    shape.min_nodes = 1;
    shape.max_nodes = 8;
    shape.max_tasks = 6;
    for (int trial = 0; trial < 100; ++trial) {
        const auto job = test_helpers::random_job(rng, trial, shape);
        JobRuntimeState state(job, 0.0);
        double now = 0.0;
        test_helpers::advance_randomly(state, rng, trial % 7, now);
        CHECK(critical_path(state).runtime == oracles::critical_path_brute(state));
    }
}

TEST_CASE("critical path of a finished job is a contract violation") {
    const auto job = make_job(0, 0.0, {{1, 1.0}});
    JobRuntimeState state(job, 0.0);
    state.schedule_replicate(0);
    state.complete_replicate(0, 1.0);
    CHECK_THROWS_AS(critical_path(state), std::invalid_argument);
    CHECK_THROWS_AS(smallest_ready_node(state), std::invalid_argument);
}

TEST_CASE("smallest ready node minimizes remaining run time") {
    const auto job = make_job(0, 0.0, {{10, 1.0}, {5, 1.0}, {1, 1.0}, {4, 1.0}},
                              {{0, 1}, {0, 2}});
    JobRuntimeState state(job, 0.0);  // ready: 0 (10) and 3 (4)
    CHECK(smallest_ready_node(state) == 3);

    const auto tie = make_job(1, 0.0, {{9, 1.0}, {4, 1.0}, {4, 1.0}});
    JobRuntimeState tie_state(tie, 0.0);
    CHECK(smallest_ready_node(tie_state) == 1);
}

TEST_CASE("extract_features reproduces a published job profile's shape") {
    // cp [0 -> 1] = 4.62 + 107.82 = 112.44 over 614 tasks; side node 2 adds
    // 3.44/2; only the root is ready, so srn = (4.62, 2).
    const auto job = make_job(5, 0.0, {{2, 2.31}, {612, 107.82 / 612.0}, {2, 1.72}},
                              {{0, 1}, {0, 2}});
    JobRuntimeState state(job, 0.0);
    const auto f = extract_features(state, make_executor(0, 3));
    CHECK(f.cp_runtime == doctest::Approx(112.44));
    CHECK(f.cp_tasks == 614);
    CHECK(f.job_runtime == doctest::Approx(115.88));
    CHECK(f.job_tasks == 616);
    CHECK(f.srn_runtime == doctest::Approx(4.62));
    CHECK(f.srn_tasks == 2);
    CHECK_FALSE(f.locality);
    CHECK(f.cp_runtime <= f.job_runtime);
    CHECK(f.cp_tasks <= f.job_tasks);
}

TEST_CASE("all aggregates coincide on a single-node local job") {
    const auto job = make_job(4, 0.0, {{2, 3.0}});
    JobRuntimeState state(job, 0.0);
    const auto f = extract_features(state, make_executor(0, 4));
    CHECK(f.as_array() == std::array<double, 7>{6, 2, 6, 2, 6, 2, 1});
}

TEST_CASE("feature invariants hold over random job states") {
    std::mt19937_64 rng(99);
    const auto executor = make_executor(0, 17);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto job = test_helpers::random_job(rng, trial % 40);
        JobRuntimeState state(job, 0.0);
        double now = 0.0;
        test_helpers::advance_randomly(state, rng, trial % 11, now);
        if (!state.has_ready_node()) continue;
        const auto f = extract_features(state, executor);
        CHECK(f.cp_runtime <= f.job_runtime + 1e-9);
        CHECK(f.cp_tasks <= f.job_tasks);
        CHECK(f.srn_runtime > 0);
        CHECK(f.srn_tasks > 0);

        double min_ready = std::numeric_limits<double>::infinity();
        for (int n : ready_nodes(state))
            min_ready = std::min(min_ready, state.node_remaining_runtime(n));
        CHECK(f.srn_runtime == min_ready);
    }
}

TEST_CASE("build_stage_dataset labels one positive per stage") {
    const auto w = generate_workload(31, 6, 10.0);
    const auto res = simulate(w, 2, PolicyRef{});
    const auto dataset = build_stage_dataset(res.trace);

    std::map<int, int> positives_per_stage;
    for (const auto& inst : dataset)
        if (inst.positive) ++positives_per_stage[inst.stage];
    CHECK(positives_per_stage.size() == res.trace.decisions.size());
    for (const auto& [stage, count] : positives_per_stage) CHECK(count == 1);

    const std::size_t positives = positives_per_stage.size();
    CHECK(positives == res.trace.decisions.size());

    CHECK(build_stage_dataset(Trace{}).empty());
}

TEST_CASE("a stage with four candidates yields one positive and three negatives") {
    Decision d;
    d.stage = 3;
    d.chosen_job = 2;
    d.chosen_node = 0;
    for (int j = 0; j < 4; ++j) d.candidates.push_back({j, FeatureVector{}});
    Trace t;
    t.decisions.push_back(d);
    const auto dataset = build_stage_dataset(t);
    REQUIRE(dataset.size() == 4);
    int positives = 0;
    for (const auto& inst : dataset) positives += inst.positive;
    CHECK(positives == 1);
}

TEST_CASE("dataset CSV round-trips with the documented header") {
    const auto w = generate_workload(8, 4, 10.0);
    const auto res = simulate(w, 2, PolicyRef{});
    const auto dataset = build_stage_dataset(res.trace);
    const auto dir = test_helpers::fresh_dir("dataset_csv");
    const auto path = (dir / "d.csv").string();
    save_dataset_csv(dataset, path);

    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "stage,job,f0,f1,f2,f3,f4,f5,f6,label");

    const auto loaded = load_dataset_csv(path);
    CHECK(loaded == dataset);
}

TEST_CASE("features shrink as work completes") {
    const auto w = generate_workload(5, 3, 10.0);
    const auto res = simulate(w, 2, PolicyRef{});
    const auto dataset = build_stage_dataset(res.trace);
    // f2/f3 are non-increasing over a job's lifetime (stages ascend in time)
    std::map<int, std::pair<double, std::int64_t>> last;
    for (const auto& inst : dataset) {
        const auto it = last.find(inst.job);
        if (it != last.end()) {
            CHECK(inst.features.job_runtime <= it->second.first + 1e-9);
            CHECK(inst.features.job_tasks <= it->second.second);
        }
        last[inst.job] = {inst.features.job_runtime, inst.features.job_tasks};
    }
}
