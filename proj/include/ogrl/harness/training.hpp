#pragma once

#include "ogrl/algo/estimator.hpp"
#include "ogrl/env/collect.hpp"
#include "ogrl/harness/metrics.hpp"
#include "ogrl/harness/run_config.hpp"
#include "ogrl/replay/replay_pool.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace ogrl::harness {

/// Seeds of the independent random streams a run draws from.
struct RunSeeds {
    std::uint64_t pool;
    std::uint64_t init;
    std::uint64_t train;
    std::uint64_t collect;
    std::uint64_t eval;

    static RunSeeds from(std::uint64_t seed);
};

struct CollectionEvent {
    std::int64_t step = 0; // global step after which the episodes were added
    std::size_t episodes = 0;
};

struct TrainingResult {
    std::vector<MetricRow> history;
    std::vector<CollectionEvent> collections;
    std::size_t initial_pool_episodes = 0;
    std::size_t final_pool_episodes = 0;
    std::optional<algo::AlgoState> state; // empty if initialization failed
    bool failed = false;
};

/// Builds the initial pool: random grasps on the training objects.
replay::ReplayPool initial_pool(const RunConfig& config);

/// Trains one estimator. The pool is built with initial_pool unless one is supplied.
/// Rows are appended every eval_every steps and after the last step; a thrown error ends
/// the run with a failed row naming the step.
TrainingResult run_training(const RunConfig& config);
TrainingResult run_training(const RunConfig& config, replay::ReplayPool pool);

/// Greedy rollouts on the named object split; returns successes / n.
double evaluate(const env::Policy& policy, const env::EnvConfig& config, std::size_t n, std::uint64_t seed,
                env::Split split);

/// Episodes behind an evaluate call, for inspecting which objects were used.
std::vector<replay::Episode> evaluation_episodes(const env::Policy& policy, const env::EnvConfig& config,
                                                 std::size_t n, std::uint64_t seed, env::Split split);

} // namespace ogrl::harness
