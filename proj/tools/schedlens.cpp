// Command-line front end for the scheduling simulator and explanation
// pipeline: gen -> sim -> extract -> train -> explain -> align -> perturb.
// Every command prints one JSON summary line on success (suppressed by
// --quiet). Exit codes: 0 success, 1 data/contract error, 2 usage error.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "schedlens/schedlens.hpp"

namespace fs = std::filesystem;
using namespace schedlens;

namespace {

bool g_quiet = false;

void summary(const ojson& j) {
    if (!g_quiet) std::cout << j.dump() << std::endl;
}

// Concatenates dataset files, shifting each file's stages past the previous
// ones so stage ids stay globally unique.
std::vector<LabeledInstance> load_datasets(const std::vector<std::string>& paths) {
    std::vector<LabeledInstance> all;
    int offset = 0;
    for (const auto& path : paths) {
        auto part = load_dataset_csv(path);
        int max_stage = -1;
        for (const auto& inst : part) max_stage = std::max(max_stage, inst.stage);
        part = offset_stages(std::move(part), offset);
        all.insert(all.end(), part.begin(), part.end());
        offset += max_stage + 1;
    }
    return all;
}

std::vector<PairedInstance> build_pairs(const std::vector<std::string>& data_paths,
                                        const std::string& tree_path, double purity,
                                        int max_neg) {
    auto instances = load_datasets(data_paths);
    if (!tree_path.empty())
        instances = mixed_leaf_instances(load_tree(tree_path), instances, purity);
    return pair_instances(instances, max_neg);
}

std::vector<std::uint64_t> parse_seeds(const std::string& csv) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        seeds.push_back(std::stoull(item));
    }
    if (seeds.empty()) throw std::invalid_argument("no seeds given");
    return seeds;
}

struct PolicyFlags {
    std::string kind = "reference";
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    bool no_locality_first = false;

    PolicyRef ref() const {
        PolicyRef r;
        r.kind = policy_kind_from_string(kind);
        r.seed = seed;
        r.epsilon = epsilon;
        r.locality_first = !no_locality_first;
        return r;
    }
};

void add_policy_flags(CLI::App* cmd, PolicyFlags& flags) {
    cmd->add_option("--policy", flags.kind, "Policy kind")
        ->check(CLI::IsMember({"reference", "snf", "cps", "fcfs", "random"}))
        ->capture_default_str();
    cmd->add_option("--policy-seed", flags.seed, "Seed for random/epsilon draws")
        ->capture_default_str();
    cmd->add_option("--epsilon", flags.epsilon, "Probability of a random pick")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_flag("--no-locality-first", flags.no_locality_first,
                  "Disable the reference policy's locality branch");
}

void add_quiet(CLI::App* cmd) {
    cmd->add_flag("--quiet", g_quiet, "Suppress the summary line");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DAG job scheduling simulator and schedule explanation toolkit"};
    app.require_subcommand(1);
    add_quiet(&app);

    // ---- gen -----------------------------------------------------------
    struct {
        std::uint64_t seed = 0;
        int jobs = 30;
        double mean = 25.0;
        DagShapeParams shape;
        std::string out;
    } gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a random workload");
    gen_cmd->add_option("--seed", gen.seed, "RNG seed")->required();
    gen_cmd->add_option("--jobs", gen.jobs, "Number of jobs")->capture_default_str();
    gen_cmd->add_option("--mean-interarrival", gen.mean, "Mean inter-arrival gap (s)")
        ->capture_default_str();
    gen_cmd->add_option("--min-nodes", gen.shape.min_nodes)->capture_default_str();
    gen_cmd->add_option("--max-nodes", gen.shape.max_nodes)->capture_default_str();
    gen_cmd->add_option("--min-tasks", gen.shape.min_tasks)->capture_default_str();
    gen_cmd->add_option("--max-tasks", gen.shape.max_tasks)->capture_default_str();
    gen_cmd->add_option("--min-duration", gen.shape.min_duration)->capture_default_str();
    gen_cmd->add_option("--max-duration", gen.shape.max_duration)->capture_default_str();
    gen_cmd->add_option("-o,--out", gen.out, "Workload JSON file")->required();
    add_quiet(gen_cmd);
    gen_cmd->callback([&] {
        const auto w = generate_workload(gen.seed, gen.jobs, gen.mean, gen.shape);
        save_workload(w, gen.out);
        summary({{"command", "gen"},
                 {"seed", gen.seed},
                 {"jobs", static_cast<int>(w.jobs.size())},
                 {"out", gen.out}});
    });

    // ---- sim -----------------------------------------------------------
    struct {
        std::string workload;
        int executors = 5;
        double warmup = 3.0;
        PolicyFlags policy;
        std::string out;
    } sim;
    auto* sim_cmd = app.add_subcommand("sim", "Simulate a workload and record the trace");
    sim_cmd->add_option("--workload", sim.workload, "Workload JSON file")->required();
    sim_cmd->add_option("--executors", sim.executors, "Executor count")->capture_default_str();
    sim_cmd->add_option("--warmup", sim.warmup, "Cold-start delay (s)")->capture_default_str();
    add_policy_flags(sim_cmd, sim.policy);
    sim_cmd->add_option("-o,--out", sim.out, "Trace JSONL file")->required();
    add_quiet(sim_cmd);
    sim_cmd->callback([&] {
        const auto w = load_workload(sim.workload);
        const auto res = simulate(w, sim.executors, sim.policy.ref(), SimConfig{sim.warmup});
        save_trace_jsonl(res.trace, sim.out);
        summary({{"command", "sim"},
                 {"decisions", res.trace.decisions.size()},
                 {"jobs", res.trace.completions.size()},
                 {"avg_jct", res.metrics.avg_jct},
                 {"time_avg_jobs", res.metrics.time_avg_jobs},
                 {"out", sim.out}});
    });

    // ---- extract -------------------------------------------------------
    struct {
        std::string trace;
        std::string out;
    } extract;
    auto* extract_cmd =
        app.add_subcommand("extract", "Build the labeled per-stage dataset from a trace");
    extract_cmd->add_option("--trace", extract.trace, "Trace JSONL file")->required();
    extract_cmd->add_option("-o,--out", extract.out, "Dataset CSV file")->required();
    add_quiet(extract_cmd);
    extract_cmd->callback([&] {
        const auto dataset = build_stage_dataset(load_trace_jsonl(extract.trace));
        save_dataset_csv(dataset, extract.out);
        std::size_t positives = 0;
        for (const auto& inst : dataset) positives += inst.positive;
        summary({{"command", "extract"},
                 {"instances", dataset.size()},
                 {"positives", positives},
                 {"out", extract.out}});
    });

    // ---- train-tree ----------------------------------------------------
    struct {
        std::vector<std::string> data;
        double lambda = 0.5;
        int max_depth = 10;
        std::string out;
    } tt;
    auto* tt_cmd = app.add_subcommand("train-tree", "Train the job-level C4.5 tree");
    tt_cmd->add_option("--data", tt.data, "Dataset CSV file(s)")->required();
    tt_cmd->add_option("--lambda", tt.lambda, "Minimum surviving split gain ratio")
        ->capture_default_str();
    tt_cmd->add_option("--max-depth", tt.max_depth)->capture_default_str();
    tt_cmd->add_option("-o,--out", tt.out, "Tree JSON file")->required();
    add_quiet(tt_cmd);
    tt_cmd->callback([&] {
        const auto instances = load_datasets(tt.data);
        const auto tree = train_c45(instances, tt.lambda, tt.max_depth);
        save_tree(tree, tt.out);
        summary({{"command", "train-tree"},
                 {"instances", instances.size()},
                 {"nodes", tree.nodes().size()},
                 {"root_feature", tree.node(0).feature},
                 {"root_gain_ratio", tree.node(0).gain_ratio},
                 {"out", tt.out}});
    });

    // ---- train-forest --------------------------------------------------
    struct {
        std::vector<std::string> data;
        std::string tree;
        double purity = 0.95;
        int max_neg = 5;
        int trees = 15;
        int depth = 9;
        std::uint64_t seed = 42;
        std::string out;
    } tf;
    auto* tf_cmd = app.add_subcommand("train-forest",
                                      "Pair instances from mixed leaves and train/tune the forest");
    tf_cmd->add_option("--data", tf.data, "Dataset CSV file(s)")->required();
    tf_cmd->add_option("--tree", tf.tree, "Job-level tree routing instances to tuning");
    tf_cmd->add_option("--purity", tf.purity, "Positive purity bar for explained leaves")
        ->capture_default_str();
    tf_cmd->add_option("--max-neg", tf.max_neg, "Negatives paired per stage")
        ->capture_default_str();
    tf_cmd->add_option("--trees", tf.trees, "Tree count (max 20)")->capture_default_str();
    tf_cmd->add_option("--depth", tf.depth, "Maximum tree depth")->capture_default_str();
    tf_cmd->add_option("--seed", tf.seed, "Training seed")->capture_default_str();
    tf_cmd->add_option("-o,--out", tf.out, "Forest JSON file")->required();
    add_quiet(tf_cmd);
    tf_cmd->callback([&] {
        const auto pairs = build_pairs(tf.data, tf.tree, tf.purity, tf.max_neg);
        const auto forest = train_rf(pairs, tf.trees, tf.depth, tf.seed);
        save_forest(forest, tf.out);
        summary({{"command", "train-forest"},
                 {"pairs", pairs.size()},
                 {"trees", forest.n_trees()},
                 {"out", tf.out}});
    });

    // ---- eval ----------------------------------------------------------
    struct {
        std::string forest;
        std::vector<std::string> data;
        std::string tree;
        double purity = 0.95;
        int max_neg = 5;
        std::string out;
    } ev;
    auto* ev_cmd = app.add_subcommand("eval", "Evaluate forest fidelity on held-out data");
    ev_cmd->add_option("--forest", ev.forest, "Forest JSON file")->required();
    ev_cmd->add_option("--data", ev.data, "Held-out dataset CSV file(s)")->required();
    ev_cmd->add_option("--tree", ev.tree, "Job-level tree routing instances to tuning");
    ev_cmd->add_option("--purity", ev.purity)->capture_default_str();
    ev_cmd->add_option("--max-neg", ev.max_neg)->capture_default_str();
    ev_cmd->add_option("-o,--out", ev.out, "Fidelity report JSON file");
    add_quiet(ev_cmd);
    ev_cmd->callback([&] {
        const auto pairs = build_pairs(ev.data, ev.tree, ev.purity, ev.max_neg);
        const auto report = evaluate_classifier(load_forest(ev.forest), pairs);
        if (!ev.out.empty()) save_report(report, ev.out);
        ojson j{{"command", "eval"},
                {"pairs", pairs.size()},
                {"accuracy", report.accuracy},
                {"auc", report.auc}};
        if (!ev.out.empty()) j["out"] = ev.out;
        summary(j);
    });

    // ---- explain-pair --------------------------------------------------
    struct {
        std::string forest;
        std::string trace;
        int stage = 0;
        int left = 0;
        int right = 0;
        std::string out;
    } ep;
    auto* ep_cmd =
        app.add_subcommand("explain-pair", "Decision paths for one pair of candidate jobs");
    ep_cmd->add_option("--forest", ep.forest)->required();
    ep_cmd->add_option("--trace", ep.trace)->required();
    ep_cmd->add_option("--stage", ep.stage, "Decision stage id")->required();
    ep_cmd->add_option("--left", ep.left, "Job in the first slot")->required();
    ep_cmd->add_option("--right", ep.right, "Job in the second slot")->required();
    ep_cmd->add_option("-o,--out", ep.out, "Report JSON file");
    add_quiet(ep_cmd);
    ep_cmd->callback([&] {
        const auto trace = load_trace_jsonl(ep.trace);
        const Decision* decision = nullptr;
        for (const auto& d : trace.decisions)
            if (d.stage == ep.stage) decision = &d;
        if (!decision)
            throw std::runtime_error("stage " + std::to_string(ep.stage) + " not in trace");
        const FeatureVector* left = nullptr;
        const FeatureVector* right = nullptr;
        for (const auto& c : decision->candidates) {
            if (c.job == ep.left) left = &c.features;
            if (c.job == ep.right) right = &c.features;
        }
        if (!left || !right)
            throw std::runtime_error("jobs " + std::to_string(ep.left) + "/" +
                                     std::to_string(ep.right) + " not both candidates at stage " +
                                     std::to_string(ep.stage));
        const auto forest = load_forest(ep.forest);
        const auto values = concat_features(*left, *right);
        const auto prediction = classify_pair(forest, values);
        ojson report{{"command", "explain-pair"},
                     {"stage", ep.stage},
                     {"left", ep.left},
                     {"right", ep.right},
                     {"predicted", to_string(prediction.pair_class)},
                     {"vote_fraction", prediction.vote_fraction},
                     {"paths", decision_paths_to_json(decision_paths(forest, values))}};
        if (!ep.out.empty()) {
            std::ofstream out(ep.out);
            if (!out) throw std::runtime_error("cannot write " + ep.out);
            out << report.dump(2) << '\n';
            summary({{"command", "explain-pair"},
                     {"predicted", to_string(prediction.pair_class)},
                     {"vote_fraction", prediction.vote_fraction},
                     {"out", ep.out}});
        } else {
            summary(report);
        }
    });

    // ---- align ---------------------------------------------------------
    struct {
        std::string workload;
        std::string trace;
        std::string tree;
        double warmup = 3.0;
        std::string out;
    } al;
    auto* al_cmd = app.add_subcommand("align", "Task-level rule alignment per tree branch");
    al_cmd->add_option("--workload", al.workload)->required();
    al_cmd->add_option("--trace", al.trace)->required();
    al_cmd->add_option("--tree", al.tree, "Job-level tree defining the branches");
    al_cmd->add_option("--warmup", al.warmup, "Cold-start delay used when recording")
        ->capture_default_str();
    al_cmd->add_option("-o,--out", al.out, "Alignment report JSON file")->required();
    add_quiet(al_cmd);
    al_cmd->callback([&] {
        const auto assigner =
            al.tree.empty() ? single_branch() : branch_by_tree_root(load_tree(al.tree));
        const auto reports = align_rules(load_workload(al.workload), load_trace_jsonl(al.trace),
                                         SimConfig{al.warmup}, assigner);
        save_alignment(reports, al.out);
        ojson branches = ojson::array();
        for (const auto& r : reports)
            branches.push_back({{"branch", r.branch}, {"best", r.best}});
        summary({{"command", "align"}, {"branches", branches}, {"out", al.out}});
    });

    // ---- perturb -------------------------------------------------------
    struct {
        std::string workload;
        int target = 0;
        std::string plans;
        int executors = 5;
        double warmup = 3.0;
        PolicyFlags policy;
        std::string out;
    } pt;
    auto* pt_cmd = app.add_subcommand("perturb", "Node-split perturbation experiment");
    pt_cmd->add_option("--workload", pt.workload, "Workload containing the target job")
        ->required();
    pt_cmd->add_option("--target", pt.target, "Target job id")->required();
    pt_cmd->add_option("--plans", pt.plans, "Split plan JSON file (object or array)")->required();
    pt_cmd->add_option("--executors", pt.executors)->capture_default_str();
    pt_cmd->add_option("--warmup", pt.warmup)->capture_default_str();
    add_policy_flags(pt_cmd, pt.policy);
    pt_cmd->add_option("-o,--out", pt.out, "Result JSON file")->required();
    add_quiet(pt_cmd);
    pt_cmd->callback([&] {
        auto w = load_workload(pt.workload);
        const auto it = std::find_if(w.jobs.begin(), w.jobs.end(),
                                     [&](const JobDag& j) { return j.id == pt.target; });
        if (it == w.jobs.end())
            throw std::runtime_error("target job " + std::to_string(pt.target) +
                                     " not in workload");
        const JobDag target = *it;
        w.jobs.erase(it);
        const auto result = perturbation_experiment(w, target, load_plans(pt.plans),
                                                    pt.policy.ref(), pt.executors,
                                                    SimConfig{pt.warmup});
        save_perturbation(result, pt.out);
        summary({{"command", "perturb"},
                 {"variants", perturbation_to_json(result)},
                 {"out", pt.out}});
    });

    // ---- import-trace --------------------------------------------------
    struct {
        std::string input;
        std::string out;
    } imp;
    auto* imp_cmd = app.add_subcommand(
        "import-trace", "Validate and canonicalize an externally recorded trace");
    imp_cmd->add_option("--input", imp.input, "Trace JSONL file")->required();
    imp_cmd->add_option("-o,--out", imp.out, "Canonical trace JSONL file")->required();
    add_quiet(imp_cmd);
    imp_cmd->callback([&] {
        const auto trace = load_trace_jsonl(imp.input);
        save_trace_jsonl(trace, imp.out);
        summary({{"command", "import-trace"},
                 {"decisions", trace.decisions.size()},
                 {"jobs", trace.completions.size()},
                 {"out", imp.out}});
    });

    // ---- e2e -----------------------------------------------------------
    struct {
        std::string outdir;
        std::string seeds = "1,2,3,4,5";
        int jobs = 30;
        double mean = 25.0;
        int executors = 5;
        double warmup = 3.0;
        PolicyFlags policy;
        double lambda = 0.5;
        int tree_depth = 10;
        double purity = 0.95;
        int max_neg = 5;
        int trees = 15;
        int depth = 9;
        std::uint64_t rf_seed = 42;
    } e2e;
    auto* e2e_cmd = app.add_subcommand(
        "e2e", "Full recovery pipeline: train on all seeds but the last, test on the last");
    e2e_cmd->add_option("--outdir", e2e.outdir, "Directory for all artifacts")->required();
    e2e_cmd->add_option("--seeds", e2e.seeds, "Comma-separated workload seeds")
        ->capture_default_str();
    e2e_cmd->add_option("--jobs", e2e.jobs)->capture_default_str();
    e2e_cmd->add_option("--mean-interarrival", e2e.mean)->capture_default_str();
    e2e_cmd->add_option("--executors", e2e.executors)->capture_default_str();
    e2e_cmd->add_option("--warmup", e2e.warmup)->capture_default_str();
    add_policy_flags(e2e_cmd, e2e.policy);
    e2e_cmd->add_option("--lambda", e2e.lambda)->capture_default_str();
    e2e_cmd->add_option("--tree-depth", e2e.tree_depth)->capture_default_str();
    e2e_cmd->add_option("--purity", e2e.purity)->capture_default_str();
    e2e_cmd->add_option("--max-neg", e2e.max_neg)->capture_default_str();
    e2e_cmd->add_option("--trees", e2e.trees)->capture_default_str();
    e2e_cmd->add_option("--depth", e2e.depth)->capture_default_str();
    e2e_cmd->add_option("--rf-seed", e2e.rf_seed)->capture_default_str();
    add_quiet(e2e_cmd);
    e2e_cmd->callback([&] {
        PipelineConfig cfg;
        cfg.seeds = parse_seeds(e2e.seeds);
        cfg.n_jobs = e2e.jobs;
        cfg.mean_interarrival = e2e.mean;
        cfg.n_executors = e2e.executors;
        cfg.sim = SimConfig{e2e.warmup};
        cfg.policy = e2e.policy.ref();
        cfg.lambda = e2e.lambda;
        cfg.tree_max_depth = e2e.tree_depth;
        cfg.positive_purity = e2e.purity;
        cfg.max_neg = e2e.max_neg;
        cfg.n_trees = e2e.trees;
        cfg.rf_max_depth = e2e.depth;
        cfg.rf_seed = e2e.rf_seed;

        const auto result = run_pipeline(cfg);
        fs::create_directories(e2e.outdir);
        const fs::path dir(e2e.outdir);
        for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
            const auto tag = std::to_string(cfg.seeds[i]);
            save_workload(result.workloads[i], (dir / ("workload_" + tag + ".json")).string());
            save_trace_jsonl(result.traces[i], (dir / ("trace_" + tag + ".jsonl")).string());
            save_dataset_csv(build_stage_dataset(result.traces[i]),
                             (dir / ("dataset_" + tag + ".csv")).string());
        }
        save_tree(result.tree, (dir / "tree.json").string());
        save_forest(result.forest, (dir / "forest.json").string());
        save_report(result.report, (dir / "report.json").string());
        save_alignment(result.alignment, (dir / "align.json").string());

        ojson branches = ojson::array();
        for (const auto& r : result.alignment)
            branches.push_back({{"branch", r.branch}, {"best", r.best}});
        summary({{"command", "e2e"},
                 {"root_feature", result.tree.node(0).feature},
                 {"root_gain_ratio", result.tree.node(0).gain_ratio},
                 {"train_pairs", result.train_pairs.size()},
                 {"test_pairs", result.test_pairs.size()},
                 {"accuracy", result.report.accuracy},
                 {"auc", result.report.auc},
                 {"branches", branches},
                 {"outdir", e2e.outdir}});
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << ojson{{"error", e.what()}}.dump() << std::endl;
        return 1;
    }
    return 0;
}
