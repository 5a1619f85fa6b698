#pragma once

#include "ogrl/action/action_select.hpp"
#include "ogrl/action/action_space.hpp"
#include "ogrl/algo/gaussian_policy.hpp"
#include "ogrl/algo/targets.hpp"
#include "ogrl/core/kv_config.hpp"
#include "ogrl/nn/lagged_copy.hpp"
#include "ogrl/nn/mlp.hpp"
#include "ogrl/nn/optimizer.hpp"
#include "ogrl/replay/replay_pool.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ogrl::algo {

enum class EstimatorKind : std::uint8_t { supervised, dql, mc, corr_mc, ddpg, pcl };

std::string to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(std::string_view name);
const std::vector<EstimatorKind>& all_estimator_kinds();

/// Whether the kind's targets depend on the discount factor.
bool uses_gamma(EstimatorKind kind);
/// Whether train_step samples whole episodes rather than transitions.
bool samples_episodes(EstimatorKind kind);

struct AlgoConfig {
    double gamma = 0.9;
    std::vector<int> hidden = {64, 64};
    nn::HiddenActivation activation = nn::HiddenActivation::relu;
    nn::OptimizerConfig optimizer;
    int batch_transitions = 64;
    int batch_episodes = 8;
    int target_lag = 50;
    int argmax_samples = 16;
    action::CemConfig cem;
    std::int64_t nu_anneal_steps = 10000;
    double tau = 0.01;
    int pcl_d = 0; // 0 = window runs to the end of the episode
    bool trust_region = false;
    double initial_std_fraction = 0.3;
    /// Pose change that corresponds to a full-scale action on each axis (x, y, z, phi).
    Eigen::Vector4d pose_action_scale = Eigen::Vector4d::Ones();

    void validate() const;
    KvConfig to_kv() const;
    /// Keys absent from `kv` keep their defaults.
    static AlgoConfig from_kv(const KvConfig& kv);
};

/// Everything one training run learns: networks, their lagged copies and optimizer states.
struct AlgoState {
    EstimatorKind kind = EstimatorKind::dql;
    AlgoConfig config;
    action::ActionSpace space;
    int obs_size = 0;

    std::optional<nn::Mlp> q_net;                          // all but pcl
    std::optional<nn::LaggedCopy<nn::Mlp>> q_target;       // dql, corr_mc, ddpg
    std::optional<nn::Mlp> actor_net;                      // ddpg
    std::optional<nn::LaggedCopy<nn::Mlp>> actor_target;   // ddpg
    std::optional<GaussianPolicy> policy;                  // pcl
    std::optional<nn::LaggedCopy<GaussianPolicy>> policy_prior; // pcl with trust_region
    std::optional<nn::Mlp> value_net;                      // pcl

    std::optional<nn::Optimizer> q_opt;
    std::optional<nn::Optimizer> actor_opt;
    std::optional<nn::Optimizer> value_opt;
    std::optional<nn::Optimizer> log_std_opt;

    std::int64_t global_step = 0;
    double nu = 0.0;
    double last_actor_objective = 0.0;

    void set_learning_rate(double lr);
};

/// Builds the networks `kind` needs with Glorot initialization from `seed`.
/// Throws std::invalid_argument for ddpg or pcl on a discrete action space.
AlgoState make_algo_state(EstimatorKind kind, const AlgoConfig& config, int obs_size,
                          const action::ActionSpace& space, std::uint64_t seed);

/// Samples a batch from the pool, applies the kind's update and ticks lagged copies and ν.
double train_step(AlgoState& state, const replay::ReplayPool& pool, Rng& rng);

/// Per-kind updates. Each applies one optimizer step and returns the loss.
double supervised_update(AlgoState& state, const EpisodeBatch& episodes);
double dql_update(AlgoState& state, const TransitionBatch& batch, Rng& rng);
double mc_update(AlgoState& state, const EpisodeBatch& episodes);
double corr_mc_update(AlgoState& state, const EpisodeBatch& episodes, Rng& rng);
double pcl_update(AlgoState& state, const EpisodeBatch& episodes);

struct DdpgLosses {
    double critic_loss = 0.0;
    double actor_objective = 0.0;
};
double ddpg_critic_step(AlgoState& state, const TransitionBatch& batch);
/// Ascends mean Q(s, pi(s)) over the batch observations; the critic is not modified.
/// Returns the objective before the step.
double ddpg_actor_step(AlgoState& state, const TransitionBatch& batch);
DdpgLosses ddpg_update(AlgoState& state, const TransitionBatch& batch);

/// Deterministic actor output scaled into the action bounds.
Eigen::VectorXd actor_action(const nn::Mlp& actor, const action::ActionSpace& space, const Eigen::VectorXd& obs);
Eigen::MatrixXd actor_actions(const nn::Mlp& actor, const action::ActionSpace& space, const Eigen::MatrixXd& obs);

using PolicyFn = std::function<Eigen::VectorXd(const Eigen::VectorXd& obs, Rng& rng)>;

/// Evaluation policy over a snapshot of the current parameters: CEM (or exhaustive search
/// on discrete spaces) over Q for the value-based kinds, the actor for ddpg, the Gaussian
/// mean for pcl.
PolicyFn greedy_policy(const AlgoState& state);

/// Data-collection policy: greedy plus scheduled exploration noise; pcl samples its Gaussian.
PolicyFn behavior_policy(const AlgoState& state, const action::ExplorationSchedule& schedule);

/// Writes one nn checkpoint per network into `dir`, named after its role.
void save_checkpoints(const AlgoState& state, const std::filesystem::path& dir);
/// Replaces the state's networks with the ones saved in `dir`.
void load_checkpoints(AlgoState& state, const std::filesystem::path& dir);

} // namespace ogrl::algo
