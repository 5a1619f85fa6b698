#pragma once

#include "ogrl/core/rng.hpp"
#include "ogrl/env/grasp_env.hpp"
#include "ogrl/replay/episode.hpp"

#include <functional>
#include <span>
#include <vector>

namespace ogrl::env {

/// Maps an observation to an action; may draw from the supplied stream.
using Policy = std::function<Eigen::VectorXd(const Eigen::VectorXd& obs, Rng& rng)>;

/// Success rate of `random_policy` with the default configuration, measured once over
/// 60000 episodes on the held-out (test) objects; binomial standard error about 0.001.
inline constexpr double random_policy_baseline = 0.067;
/// The same measurement on the training objects (20000 episodes).
inline constexpr double random_policy_train_baseline = 0.048;

/// Scripted data-collection policy: uniform actions with dz shifted down by
/// `config.random_drift` before clipping.
Policy random_policy(const EnvConfig& config);

/// Policy that never moves the gripper.
Policy zero_policy();

replay::Episode run_episode(const EnvConfig& config, std::span<const ObjectIdentity> identities,
                            std::uint64_t episode_seed, const Policy& policy, Rng& policy_rng,
                            std::uint64_t episode_id,
                            replay::Provenance provenance = replay::Provenance::initial_random);

struct CollectionPlan {
    Split split = Split::train;
    std::uint64_t seed = 0;
    std::size_t first_index = 0; // episode index within the object schedule; also the episode id
    replay::Provenance provenance = replay::Provenance::initial_random;
};

/// n episodes of `policy` with objects rotated per the task's schedule. Episode i uses
/// reset seed derive_seed(plan.seed, first_index + i), so any slice is reproducible.
std::vector<replay::Episode> collect_episodes(const EnvConfig& config, std::size_t n, const CollectionPlan& plan,
                                              const Policy& policy);

/// Random-policy episodes on the training objects.
std::vector<replay::Episode> collect_random_grasps(const EnvConfig& config, std::size_t n_episodes,
                                                   std::uint64_t seed);

} // namespace ogrl::env
