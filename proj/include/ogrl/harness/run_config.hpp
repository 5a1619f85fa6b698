#pragma once

#include "ogrl/action/action_select.hpp"
#include "ogrl/algo/estimator.hpp"
#include "ogrl/core/kv_config.hpp"
#include "ogrl/env/env_config.hpp"

#include <cstdint>
#include <string>

namespace ogrl::harness {

enum class Regime : std::uint8_t { off_policy, on_policy };

std::string to_string(Regime regime);
Regime parse_regime(std::string_view text);

/// Desk-scale pool sizes, in episodes.
inline constexpr std::size_t small_pool = 1000;
inline constexpr std::size_t medium_pool = 5000;
inline constexpr std::size_t large_pool = 20000;

/// Algorithm defaults with the supervised pose scale taken from the grasp geometry.
algo::AlgoConfig default_hyperparameters(const env::EnvConfig& env);

struct RunConfig {
    algo::EstimatorKind algo = algo::EstimatorKind::dql;
    env::EnvConfig env;
    algo::AlgoConfig hyper = default_hyperparameters(env);
    std::size_t pool_episodes = medium_pool;
    Regime regime = Regime::off_policy;
    std::int64_t train_steps = 20000;
    std::int64_t collect_every = 1000;
    std::size_t collect_count = 50;
    std::int64_t eval_every = 1000;
    std::size_t eval_episodes = 50;
    action::ExplorationSchedule exploration;
    std::uint64_t seed = 1;

    void validate() const;

    /// Flat `key = value` form; env keys are prefixed with "env.".
    KvConfig to_kv() const;
    /// Missing keys keep their defaults, except that nu_anneal_steps defaults to half of train_steps.
    static RunConfig from_kv(const KvConfig& kv);

    /// Hash of every setting except the seed.
    std::uint64_t config_hash() const;
    /// `<algo>-<config hash hex>-s<seed>`.
    std::string run_id() const;
};

} // namespace ogrl::harness
