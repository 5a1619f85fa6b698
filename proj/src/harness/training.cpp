#include "ogrl/harness/training.hpp"

#include "ogrl/core/rng.hpp"

#include <chrono>
#include <cmath>
#include <exception>

namespace ogrl::harness {

RunSeeds RunSeeds::from(std::uint64_t seed)
{
    return {derive_seed(seed, 1), derive_seed(seed, 2), derive_seed(seed, 3), derive_seed(seed, 4),
            derive_seed(seed, 5)};
}

replay::ReplayPool initial_pool(const RunConfig& config)
{
    replay::ReplayPool pool(std::nullopt, config.env.descriptor_hash());
    for (auto& e : env::collect_random_grasps(config.env, config.pool_episodes, RunSeeds::from(config.seed).pool))
        pool.add_episode(std::move(e));
    return pool;
}

std::vector<replay::Episode> evaluation_episodes(const env::Policy& policy, const env::EnvConfig& config,
                                                 std::size_t n, std::uint64_t seed, env::Split split)
{
    if (n < 1)
        throw std::invalid_argument("evaluation needs at least one episode");
    env::CollectionPlan plan;
    plan.split = split;
    plan.seed = seed;
    plan.provenance = replay::Provenance::on_policy;
    return env::collect_episodes(config, n, plan, policy);
}

double evaluate(const env::Policy& policy, const env::EnvConfig& config, std::size_t n, std::uint64_t seed,
                env::Split split)
{
    const auto episodes = evaluation_episodes(policy, config, n, seed, split);
    std::size_t successes = 0;
    for (const auto& e : episodes)
        successes += e.outcome > 0.5 ? 1 : 0;
    return static_cast<double>(successes) / static_cast<double>(n);
}

TrainingResult run_training(const RunConfig& config)
{
    config.validate();
    return run_training(config, initial_pool(config));
}

TrainingResult run_training(const RunConfig& config, replay::ReplayPool pool)
{
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    const auto seeds = RunSeeds::from(config.seed);
    TrainingResult result;
    result.initial_pool_episodes = pool.episode_count();
    const MetricRow base = row_template(config);
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

    std::int64_t step = 0;
    try {
        config.validate();
        result.state = algo::make_algo_state(config.algo, config.hyper, config.env.feature_size(),
                                             config.env.action_space(), seeds.init);
        auto& state = *result.state;
        auto rng = make_rng(seeds.train);
        double loss_sum = 0.0;
        std::int64_t loss_count = 0;
        std::size_t collected = 0;

        auto record = [&] {
            MetricRow row = base;
            row.step = step;
            row.train_loss = loss_count > 0 ? loss_sum / static_cast<double>(loss_count) : 0.0;
            row.eval_success = evaluate(algo::greedy_policy(state), config.env, config.eval_episodes, seeds.eval,
                                        env::Split::test);
            row.wall_seconds = elapsed();
            result.history.push_back(row);
            loss_sum = 0.0;
            loss_count = 0;
        };

        while (step < config.train_steps) {
            const double loss = algo::train_step(state, pool, rng);
            if (!std::isfinite(loss))
                throw std::runtime_error("non-finite training loss");
            loss_sum += loss;
            ++loss_count;
            ++step;
            if (config.regime == Regime::on_policy && step % config.collect_every == 0) {
                env::CollectionPlan plan;
                plan.split = env::Split::train;
                plan.seed = seeds.collect;
                plan.first_index = config.pool_episodes + collected;
                plan.provenance = replay::Provenance::on_policy;
                auto episodes = env::collect_episodes(config.env, config.collect_count, plan,
                                                      algo::behavior_policy(state, config.exploration));
                for (auto& e : episodes)
                    pool.add_episode(std::move(e));
                collected += config.collect_count;
                result.collections.push_back({step, config.collect_count});
            }
            if (step % config.eval_every == 0 || step == config.train_steps)
                record();
        }
        if (config.train_steps == 0)
            record();
    } catch (const std::exception& ex) {
        MetricRow row = base;
        row.step = step;
        row.status = std::string("failed: step ") + std::to_string(step) + ": " + ex.what();
        row.wall_seconds = elapsed();
        result.history.push_back(row);
        result.failed = true;
    }
    result.final_pool_episodes = pool.episode_count();
    return result;
}

} // namespace ogrl::harness
