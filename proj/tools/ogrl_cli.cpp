#include "ogrl/algo/estimator.hpp"
#include "ogrl/env/collect.hpp"
#include "ogrl/env/grasp_env.hpp"
#include "ogrl/harness/report.hpp"
#include "ogrl/harness/sweep.hpp"
#include "ogrl/harness/training.hpp"
#include "ogrl/replay/pool_file.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace ogrl;

struct ConfigArgs {
    std::string file;
    std::vector<std::string> sets;

    // Flag overrides; unset options leave the file / default value alone.
    std::optional<std::string> algo;
    std::optional<double> gamma;
    std::optional<std::int64_t> nu_anneal_steps;
    std::optional<double> tau;
    std::optional<int> pcl_d;
    std::optional<int> batch_size;
    std::optional<int> argmax_samples;
    std::optional<int> cem_iters;
    std::optional<int> cem_pop;
    std::optional<std::int64_t> explore_duration;
    std::optional<double> explore_scale;
    std::optional<double> learning_rate;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> train_steps;
    std::optional<std::uint64_t> pool_episodes;
    std::optional<std::string> regime;
    std::optional<std::string> task;

    void attach(CLI::App* app, bool algo_flags)
    {
        app->add_option("--config", file, "key = value config file");
        app->add_option("--set", sets, "extra key=value override (repeatable)");
        app->add_option("--seed", seed, "master seed");
        app->add_option("--task", task, "regular or targeted");
        if (!algo_flags)
            return;
        app->add_option("--algo", algo, "supervised, dql, mc, corr_mc, ddpg or pcl");
        app->add_option("--gamma", gamma, "discount factor");
        app->add_option("--nu-anneal-steps", nu_anneal_steps, "steps for the corr_mc nu ramp");
        app->add_option("--tau", tau, "pcl entropy temperature");
        app->add_option("--pcl-d", pcl_d, "pcl window length (0 = to episode end)");
        app->add_option("--batch-size", batch_size, "transitions (dql, ddpg) or episodes (others) per update");
        app->add_option("--argmax-samples", argmax_samples, "uniform samples for the bootstrap max");
        app->add_option("--cem-iters", cem_iters, "CEM iterations");
        app->add_option("--cem-pop", cem_pop, "CEM population per iteration");
        app->add_option("--explore-duration", explore_duration, "steps over which exploration noise decays");
        app->add_option("--explore-scale", explore_scale, "initial exploration noise scale");
        app->add_option("--learning-rate", learning_rate, "optimizer learning rate");
        app->add_option("--train-steps", train_steps, "gradient steps");
        app->add_option("--pool-episodes", pool_episodes, "random episodes in the initial pool");
        app->add_option("--regime", regime, "off_policy or on_policy");
    }

    KvConfig merged() const
    {
        KvConfig kv;
        if (!file.empty())
            kv = KvConfig::load(file);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("--set expects key=value, got '" + s + "'");
            auto trim = [](std::string t) {
                const auto b = t.find_first_not_of(" \t");
                const auto e = t.find_last_not_of(" \t");
                return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
            };
            kv.set(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
        }
        if (algo)
            kv.set("algo", *algo);
        if (gamma)
            kv.set("gamma", *gamma);
        if (nu_anneal_steps)
            kv.set("nu_anneal_steps", *nu_anneal_steps);
        if (tau)
            kv.set("tau", *tau);
        if (pcl_d)
            kv.set("pcl_d", *pcl_d);
        if (argmax_samples)
            kv.set("argmax_samples", *argmax_samples);
        if (cem_iters)
            kv.set("cem_iterations", *cem_iters);
        if (cem_pop)
            kv.set("cem_population", *cem_pop);
        if (explore_duration)
            kv.set("explore_duration", *explore_duration);
        if (explore_scale)
            kv.set("explore_scale", *explore_scale);
        if (learning_rate)
            kv.set("learning_rate", *learning_rate);
        if (seed)
            kv.set("seed", *seed);
        if (train_steps)
            kv.set("train_steps", *train_steps);
        if (pool_episodes)
            kv.set("pool_episodes", *pool_episodes);
        if (regime)
            kv.set("regime", *regime);
        if (task)
            kv.set("env.task", *task);
        if (batch_size) {
            const auto kind = algo::parse_estimator_kind(kv.get_string("algo", "dql"));
            kv.set(algo::samples_episodes(kind) ? "batch_episodes" : "batch_transitions", *batch_size);
        }
        return kv;
    }

    harness::RunConfig run_config() const { return harness::RunConfig::from_kv(merged()); }
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

int cmd_collect(const ConfigArgs& args, std::size_t episodes, const std::string& out)
{
    const auto cfg = args.run_config();
    replay::ReplayPool pool(std::nullopt, cfg.env.descriptor_hash());
    for (auto& e : env::collect_random_grasps(cfg.env, episodes, harness::RunSeeds::from(cfg.seed).pool))
        pool.add_episode(std::move(e));
    replay::save_pool(pool, out);
    std::cout << "wrote " << pool.episode_count() << " episodes (" << pool.transition_count()
              << " transitions, success " << fmt(pool.success_rate()) << ") to " << out << "\n";
    return 0;
}

int cmd_train(const ConfigArgs& args, const std::string& out_dir, const std::string& pool_path)
{
    const auto cfg = args.run_config();
    std::filesystem::create_directories(out_dir);
    cfg.to_kv().save(std::filesystem::path(out_dir) / "config.cfg");
    harness::TrainingResult result;
    if (!pool_path.empty()) {
        auto pool = replay::load_pool(pool_path);
        if (pool.env_hash() != cfg.env.descriptor_hash())
            std::cerr << "warning: pool was collected with a different environment config\n";
        result = harness::run_training(cfg, std::move(pool));
    } else {
        result = harness::run_training(cfg);
    }
    harness::write_metrics(std::filesystem::path(out_dir) / "metrics.csv", result.history);
    if (result.state)
        algo::save_checkpoints(*result.state, std::filesystem::path(out_dir) / "checkpoints");
    for (const auto& row : result.history)
        std::cout << "step " << row.step << "  loss " << fmt(row.train_loss) << "  held-out success "
                  << fmt(row.eval_success) << "  " << row.status << "\n";
    std::cout << "collections: " << result.collections.size() << ", pool " << result.initial_pool_episodes << " -> "
              << result.final_pool_episodes << " episodes\n";
    return result.failed ? 1 : 0;
}

int cmd_eval(const ConfigArgs& args, const std::string& run_dir, const std::string& policy_name, std::size_t n,
             const std::string& split_name, std::uint64_t seed)
{
    const auto split = env::parse_split(split_name);
    harness::RunConfig cfg;
    env::Policy policy;
    if (policy_name == "random" || policy_name == "zero") {
        cfg = args.run_config();
        policy = policy_name == "random" ? env::random_policy(cfg.env) : env::zero_policy();
    } else if (policy_name == "greedy") {
        if (run_dir.empty())
            throw std::invalid_argument("--run-dir is required for the greedy policy");
        KvConfig kv = KvConfig::load(std::filesystem::path(run_dir) / "config.cfg");
        kv.merge(args.merged());
        cfg = harness::RunConfig::from_kv(kv);
        auto state = algo::make_algo_state(cfg.algo, cfg.hyper, cfg.env.feature_size(), cfg.env.action_space(), 0);
        algo::load_checkpoints(state, std::filesystem::path(run_dir) / "checkpoints");
        policy = algo::greedy_policy(state);
    } else {
        throw std::invalid_argument("--policy must be greedy, random or zero");
    }
    const double rate = harness::evaluate(policy, cfg.env, n, seed, split);
    std::cout << policy_name << " policy, " << n << " episodes on " << env::to_string(split)
              << " objects: success " << fmt(rate) << "\n";
    return 0;
}

template <typename T>
void override_axis(std::vector<T>& axis, const std::vector<T>& given)
{
    if (!given.empty())
        axis = given;
}

int main_impl(int argc, char** argv)
{
    CLI::App app{"Off-policy Q-function estimation on a desk-scale grasping task"};
    app.require_subcommand(1);

    ConfigArgs collect_args;
    std::size_t collect_n = harness::medium_pool;
    std::string collect_out = "pool.ogrp";
    auto* collect = app.add_subcommand("collect", "collect random-policy grasps into a pool file");
    collect_args.attach(collect, false);
    collect->add_option("--episodes,-n", collect_n, "number of episodes");
    collect->add_option("--out,-o", collect_out, "pool file to write");

    ConfigArgs train_args;
    std::string train_out = "run";
    std::string train_pool;
    auto* train = app.add_subcommand("train", "train one estimator and write metrics and checkpoints");
    train_args.attach(train, true);
    train->add_option("--out,-o", train_out, "output directory");
    train->add_option("--pool", train_pool, "start from this pool file instead of collecting");

    ConfigArgs eval_args;
    std::string eval_run;
    std::string eval_policy = "greedy";
    std::size_t eval_n = 100;
    std::string eval_split = "test";
    std::uint64_t eval_seed = 12345;
    auto* eval = app.add_subcommand("eval", "evaluate a trained run or a scripted policy");
    eval_args.attach(eval, false);
    eval->add_option("--run-dir", eval_run, "directory written by train");
    eval->add_option("--policy", eval_policy, "greedy, random or zero");
    eval->add_option("--episodes,-n", eval_n, "episodes");
    eval->add_option("--split", eval_split, "train or test");
    eval->add_option("--eval-seed", eval_seed, "seed of the evaluation episodes");

    ConfigArgs sweep_args;
    std::string sweep_out = "sweep/metrics.csv";
    int sweep_workers = 1;
    std::vector<double> sweep_lrs, sweep_gammas;
    std::vector<int> sweep_widths;
    std::vector<std::int64_t> sweep_durations;
    std::vector<std::uint64_t> sweep_seeds;
    auto* sweep = app.add_subcommand("sweep", "run a resumable hyperparameter sweep");
    sweep_args.attach(sweep, true);
    sweep->add_option("--out,-o", sweep_out, "metrics CSV (appended; completed runs are skipped)");
    sweep->add_option("--workers,-j", sweep_workers, "parallel worker threads");
    sweep->add_option("--learning-rates", sweep_lrs, "learning-rate axis");
    sweep->add_option("--widths", sweep_widths, "hidden width axis");
    sweep->add_option("--gammas", sweep_gammas, "discount axis (ignored by mc and supervised)");
    sweep->add_option("--explore-durations", sweep_durations, "exploration duration axis");
    sweep->add_option("--seeds", sweep_seeds, "seeds");

    auto* report = app.add_subcommand("report", "summarize a metrics file");
    report->require_subcommand(1);
    std::string report_metrics;
    std::string report_out = "report";
    auto* stability = report->add_subcommand("stability", "sorted final success per algorithm");
    stability->add_option("metrics", report_metrics, "metrics CSV")->required();
    stability->add_option("--out,-o", report_out, "output directory");
    auto* bars = report->add_subcommand("bars", "mean and std per algorithm, pool size and regime");
    bars->add_option("metrics", report_metrics, "metrics CSV")->required();
    bars->add_option("--out,-o", report_out, "output directory");

    auto* env_cmd = app.add_subcommand("env", "environment utilities");
    env_cmd->require_subcommand(1);
    ConfigArgs describe_args;
    auto* describe = env_cmd->add_subcommand("describe", "print the resolved environment config");
    describe_args.attach(describe, false);

    auto* pool_cmd = app.add_subcommand("pool", "pool file utilities");
    pool_cmd->require_subcommand(1);
    std::string stats_path;
    auto* stats = pool_cmd->add_subcommand("stats", "summarize a pool file");
    stats->add_option("pool", stats_path, "pool file")->required();

    CLI11_PARSE(app, argc, argv);

    if (collect->parsed())
        return cmd_collect(collect_args, collect_n, collect_out);
    if (train->parsed())
        return cmd_train(train_args, train_out, train_pool);
    if (eval->parsed())
        return cmd_eval(eval_args, eval_run, eval_policy, eval_n, eval_split, eval_seed);
    if (sweep->parsed()) {
        const auto base = sweep_args.run_config();
        harness::SweepGrid grid;
        override_axis(grid.learning_rates, sweep_lrs);
        override_axis(grid.widths, sweep_widths);
        override_axis(grid.gammas, sweep_gammas);
        override_axis(grid.explore_durations, sweep_durations);
        override_axis(grid.seeds, sweep_seeds);
        harness::SweepOptions opts;
        opts.metrics_path = sweep_out;
        opts.workers = sweep_workers;
        const auto s = harness::run_sweep(grid, base, opts);
        std::cout << s.total << " runs: " << s.skipped << " already done, " << s.executed << " executed, " << s.failed
                  << " failed\n";
        return s.failed ? 1 : 0;
    }
    if (stability->parsed()) {
        const auto curves = harness::stability_report(harness::read_metrics(report_metrics));
        harness::write_stability_report(curves, report_out);
        for (const auto& c : curves)
            std::cout << c.algo << ": " << c.success.size() << " runs, median " << fmt(c.median) << ", IQR "
                      << fmt(c.iqr()) << "\n";
        return 0;
    }
    if (bars->parsed()) {
        const auto cells = harness::barplot_report(harness::read_metrics(report_metrics));
        harness::write_barplot_report(cells, report_out);
        for (const auto& c : cells)
            std::cout << c.algo << " pool " << c.pool_episodes << " " << c.regime << ": "
                      << (c.n ? fmt(c.mean) : std::string("missing")) << " +- "
                      << (c.stddev ? fmt(*c.stddev) : std::string("NA")) << " (n=" << c.n << ")\n";
        return 0;
    }
    if (describe->parsed()) {
        const auto cfg = describe_args.run_config();
        std::cout << cfg.env.to_kv().to_string();
        std::cout << "# observation: " << env::describe_observation(cfg.env).to_string() << "\n";
        std::cout << "# objects per bin: " << cfg.env.objects_per_bin() << "\n";
        std::cout << "# random-policy success (default config): held-out " << env::random_policy_baseline
                  << ", training objects " << env::random_policy_train_baseline << "\n";
        return 0;
    }
    if (stats->parsed()) {
        const auto pool = replay::load_pool(stats_path);
        const auto c = pool.counters();
        std::cout << "episodes " << pool.episode_count() << "\ntransitions " << pool.transition_count()
                  << "\nsuccess rate " << fmt(pool.success_rate()) << "\ninitial random " << c.initial_random
                  << "\non-policy added " << c.on_policy_added << "\nenv hash " << pool.env_hash() << "\n";
        return 0;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return main_impl(argc, argv);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}
