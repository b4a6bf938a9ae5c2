#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace schedlens;
using test_helpers::make_job;

using oracles::split_preserves_edges;

TEST_CASE("splitting 13 tasks into [1,12] makes two sibling nodes") {
    const auto job = make_job(0, 0.0, {{4, 2.0}, {13, 1.5}, {6, 1.0}}, {{0, 1}, {1, 2}});
    const auto split = split_node(job, {1, {1, 12}});
    REQUIRE(split.nodes.size() == 4);
    CHECK(split.nodes[1].num_tasks == 1);
    CHECK(split.nodes[3].num_tasks == 12);
    CHECK(split.nodes[3].per_task_duration == 1.5);
    CHECK(validate_dag(split).empty());
    CHECK(oracles::is_acyclic(split));
    // both parts keep the original's dependencies, no edge between siblings
    CHECK(split_preserves_edges(job, split, 1, {1, 3}));
    for (const auto& [p, c] : split.edges) CHECK(!(p == 1 && c == 3));
    CHECK(split.total_tasks() == job.total_tasks());
    CHECK(split.total_runtime() == doctest::Approx(job.total_runtime()));
}

TEST_CASE("a 29-task node splits to 9 nodes, one keeping 21 tasks") {
    const auto job = make_job(0, 0.0, {{29, 2.0}, {3, 1.0}}, {{0, 1}});
    const auto split = split_node(job, {0, {21, 1, 1, 1, 1, 1, 1, 1, 1}});
    CHECK(split.nodes.size() == 10);
    CHECK(split.nodes[0].num_tasks == 21);
    for (int id = 2; id < 10; ++id) CHECK(split.nodes[static_cast<std::size_t>(id)].num_tasks == 1);
    CHECK(split.total_tasks() == job.total_tasks());
    CHECK(validate_dag(split).empty());
}

TEST_CASE("invalid split plans are rejected") {
    const auto job = make_job(0, 0.0, {{10, 1.0}});
    CHECK_THROWS_AS(split_node(job, {0, {5, 4}}), std::invalid_argument);     // sum mismatch
    CHECK_THROWS_AS(split_node(job, {0, {10, 0}}), std::invalid_argument);    // zero part
    CHECK_THROWS_AS(split_node(job, {0, {10}}), std::invalid_argument);       // single part
    CHECK_THROWS_AS(split_node(job, {3, {5, 5}}), std::invalid_argument);     // unknown node
}

TEST_CASE("structural invariants hold for every 2-part plan of small nodes") {
    std::mt19937_64 rng(2);
    DagShapeParams shape;
    shape.min_tasks = 2;
    shape.max_tasks = 12;
    for (int trial = 0; trial < 10; ++trial) {
        const auto job = test_helpers::random_job(rng, trial, shape);
        for (const auto& nd : job.nodes) {
            std::vector<int> images{nd.id, static_cast<int>(job.nodes.size())};
            for (int k = 1; k < nd.num_tasks; ++k) {
                const auto split = split_node(job, {nd.id, {k, nd.num_tasks - k}});
                CHECK(split.total_tasks() == job.total_tasks());
                CHECK(split.total_runtime() == doctest::Approx(job.total_runtime()));
                CHECK(oracles::is_acyclic(split));
                CHECK(validate_dag(split).empty());
                CHECK(split_preserves_edges(job, split, nd.id, images));
            }
        }
    }
}

TEST_CASE("an empty plan list reports only the original JCT") {
    const auto background = generate_workload(70, 4, 10.0);
    std::mt19937_64 rng(71);
    auto target = test_helpers::random_job(rng, 1000);
    target.arrival_time = 5.0;
    const auto result = perturbation_experiment(background, target, {}, PolicyRef{}, 2);
    REQUIRE(result.variants.size() == 1);
    CHECK(result.variants[0].variant == "original");
    CHECK(result.variants[0].normalized == 1.0);
    CHECK(result.variants[0].jct > 0.0);
}

TEST_CASE("a [1, n-1] split never delays the job's first scheduled task") {
    std::mt19937_64 rng(72);
    DagShapeParams shape;
    shape.min_tasks = 2;
    for (int trial = 0; trial < 12; ++trial) {
        const auto background =
            generate_workload(7200 + static_cast<std::uint64_t>(trial), 6, 8.0);
        auto target = test_helpers::random_job(rng, 1000, shape);
        target.arrival_time = 10.0;

        int root = -1;
        for (const auto& nd : target.nodes) {
            bool is_root = true;
            for (const auto& [p, c] : target.edges)
                if (c == nd.id) is_root = false;
            if (is_root && nd.num_tasks >= 2) {
                root = nd.id;
                break;
            }
        }
        REQUIRE(root >= 0);
        const auto split =
            split_node(target, {root, {1, target.nodes[static_cast<std::size_t>(root)].num_tasks - 1}});

        const auto first_pick = [&](const JobDag& variant) {
            const auto res = simulate(with_job(background, variant), 2, PolicyRef{});
            for (const auto& d : res.trace.decisions)
                if (d.chosen_job == 1000) return d.time;
            return std::numeric_limits<double>::infinity();
        };
        CHECK(first_pick(split) <= first_pick(target));
    }
}

TEST_CASE("variants run against a bit-identical background") {
    const auto background = generate_workload(73, 5, 12.0);
    std::mt19937_64 rng(74);
    DagShapeParams shape;
    shape.min_tasks = 4;
    auto target = test_helpers::random_job(rng, 999, shape);
    target.arrival_time = 20.0;
    int node = 0;
    for (const auto& nd : target.nodes)
        if (nd.num_tasks >= 2) node = nd.id;
    const SplitPlan plan{node,
                         {1, target.nodes[static_cast<std::size_t>(node)].num_tasks - 1}};

    const auto result = perturbation_experiment(background, target, {plan}, PolicyRef{}, 2);
    REQUIRE(result.variants.size() == 2);
    CHECK(result.variants[0].variant == "original");
    CHECK(result.variants[1].variant == "plan1");
    CHECK(result.variants[1].normalized ==
          doctest::Approx(result.variants[1].jct / result.variants[0].jct));
    CHECK(result.variants[1].normalized > 0.0);
}

TEST_CASE("plan files parse as one object or an array") {
    const auto dir = test_helpers::fresh_dir("plans");
    const auto single = (dir / "one.json").string();
    {
        std::ofstream out(single);
        out << R"({"node_id": 0, "parts": [1, 12]})";
    }
    const auto plans = load_plans(single);
    REQUIRE(plans.size() == 1);
    CHECK(plans[0].node_id == 0);
    CHECK(plans[0].parts == std::vector<int>{1, 12});

    const auto multi = (dir / "many.json").string();
    {
        std::ofstream out(multi);
        out << R"([{"node_id": 0, "parts": [28, 1]}, {"node_id": 0, "parts": [25, 1, 1, 1, 1]}])";
    }
    CHECK(load_plans(multi).size() == 2);
}
