#include "ogrl/env/collect.hpp"

#include <algorithm>
#include <stdexcept>

namespace ogrl::env {

namespace {

constexpr std::uint64_t schedule_stream = 0x0b1ec75c4ed01eULL;
constexpr std::uint64_t policy_stream = 0x90110c7a11ULL;

} // namespace

Policy random_policy(const EnvConfig& config)
{
    const double drift = config.random_drift;
    return [drift](const Eigen::VectorXd&, Rng& rng) {
        Eigen::VectorXd a(4);
        a(0) = uniform(rng, -1.0, 1.0);
        a(1) = uniform(rng, -1.0, 1.0);
        a(2) = std::clamp(uniform(rng, -1.0, 1.0) - drift, -1.0, 1.0);
        a(3) = uniform(rng, -1.0, 1.0);
        return a;
    };
}

Policy zero_policy()
{
    return [](const Eigen::VectorXd&, Rng&) { return Eigen::VectorXd(Eigen::VectorXd::Zero(4)); };
}

replay::Episode run_episode(const EnvConfig& config, std::span<const ObjectIdentity> identities,
                            std::uint64_t episode_seed, const Policy& policy, Rng& policy_rng,
                            std::uint64_t episode_id, replay::Provenance provenance)
{
    GraspEnv env(config, identities, episode_seed);
    replay::EpisodeBuilder builder(episode_id, replay::make_features(env.observe()), env.object_seeds());
    bool done = false;
    while (!done) {
        const auto pose = env.world().gripper;
        Eigen::VectorXd action = policy(*builder.current_obs(), policy_rng);
        if (action.size() != 4)
            throw std::invalid_argument("grasp policy must return 4 action components");
        action = action.cwiseMax(-1.0).cwiseMin(1.0);
        auto result = env.step(action);
        done = result.done;
        builder.add(std::move(action), result.reward, replay::make_features(std::move(result.observation)), done, pose);
    }
    return std::move(builder).finish(env.world().gripper, provenance);
}

std::vector<replay::Episode> collect_episodes(const EnvConfig& config, std::size_t n, const CollectionPlan& plan,
                                              const Policy& policy)
{
    const auto splits = generate_object_splits(config.n_train_objects, config.n_test_objects, config.master_seed);
    const auto& seeds = plan.split == Split::train ? splits.train : splits.test;
    const ObjectSchedule schedule(config, seeds, derive_seed(plan.seed, schedule_stream));
    std::vector<replay::Episode> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t index = plan.first_index + i;
        const auto ids = schedule.identities_for_episode(index);
        auto policy_rng = make_rng(derive_seed(plan.seed ^ policy_stream, index));
        out.push_back(run_episode(config, ids, derive_seed(plan.seed, index), policy, policy_rng, index,
                                  plan.provenance));
    }
    return out;
}

std::vector<replay::Episode> collect_random_grasps(const EnvConfig& config, std::size_t n_episodes,
                                                   std::uint64_t seed)
{
    if (n_episodes == 0)
        throw std::invalid_argument("collect_random_grasps needs n_episodes > 0");
    CollectionPlan plan;
    plan.seed = seed;
    return collect_episodes(config, n_episodes, plan, random_policy(config));
}

} // namespace ogrl::env
