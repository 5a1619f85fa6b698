#pragma once

#include "ogrl/action/action_select.hpp"
#include "ogrl/core/rng.hpp"
#include "ogrl/nn/mlp.hpp"
#include "ogrl/replay/episode.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace ogrl::algo {

using EpisodeBatch = std::vector<const replay::Episode*>;
using TransitionBatch = std::vector<const replay::Transition*>;

template <typename Container>
EpisodeBatch episode_ptrs(const Container& episodes)
{
    EpisodeBatch out;
    out.reserve(episodes.size());
    for (const auto& e : episodes)
        out.push_back(&e);
    return out;
}

/// Network input columns [obs ; encoded action].
Eigen::MatrixXd q_inputs(const Eigen::MatrixXd& obs, const Eigen::MatrixXd& actions, const action::ActionSpace& space);

/// Q(obs_j, action_j) for each column j.
Eigen::VectorXd q_values(const nn::Mlp& q, const Eigen::MatrixXd& obs, const Eigen::MatrixXd& actions,
                         const action::ActionSpace& space);

/// Scores candidate actions at one observation; the network is captured by reference.
action::QFunction q_function(const nn::Mlp& q, const action::ActionSpace& space);

struct RegressionStep {
    double loss = 0.0;
    nn::BatchGradients grads;
};

/// loss = 1/2 mean (f(x_j) - y_j)^2 and its gradients; targets are constants.
RegressionStep regression_gradients(const nn::Mlp& net, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets);

struct SupervisedSample {
    replay::Features obs;
    Eigen::VectorXd action;
    double label = 0.0;
};

/// Displacement from `from` to `to` in action units (per-axis division by `scale`), clipped to
/// [-1, 1]. The angle difference is wrapped to [-pi, pi).
Eigen::VectorXd pose_displacement_action(const replay::Pose& from, const replay::Pose& to, const Eigen::Vector4d& scale);

/// One sample per transition: the action that would have moved the gripper straight to the
/// pose where the episode ended, labelled with the episode outcome.
std::vector<SupervisedSample> supervised_targets(const EpisodeBatch& episodes, const Eigen::Vector4d& scale);

/// Per-episode, per-step targets.
using TargetTable = std::vector<std::vector<double>>;

/// Discounted return from each step to the end of its episode.
TargetTable mc_targets(const EpisodeBatch& episodes, double gamma);

/// Estimated advantage A(s_t, a_t) for every step of an episode.
using AdvantageFn = std::function<Eigen::VectorXd(const replay::Episode&)>;

/// target_t = r_t + sum_{t' > t} gamma^(t'-t) (r_t' - nu * A_t').  nu = 0 gives mc_targets exactly.
TargetTable corr_mc_targets(const EpisodeBatch& episodes, double gamma, double nu, const AdvantageFn& advantage);

/// A(s, a) = Q(s, a) - max_a' Q(s, a'), with the max from k uniform samples (exhaustive when discrete).
AdvantageFn network_advantage(const nn::Mlp& q, const action::ActionSpace& space, int k, Rng& rng);

/// y = r on terminal transitions, otherwise r + gamma * Q_target(s', a') with
/// a' the best of k uniform samples under q_net.
Eigen::VectorXd dql_targets(const TransitionBatch& batch, const nn::Mlp& q_net, const nn::Mlp& q_target,
                            const action::ActionSpace& space, double gamma, int k, Rng& rng);

/// Linear ramp from 0 to 1 over anneal_steps.
double nu_schedule(std::int64_t global_step, std::int64_t anneal_steps);

/// Residual for each window start t of one episode with T steps:
///   V_t - gamma^d' V_{t+d'} - sum_{i=t}^{t+d'-1} gamma^(i-t) (r_i - tau * logratio_i),
/// d' = min(d, T - t), or T - t when d == 0. `values` has T + 1 entries; the last one is the
/// value after the final step (0 for a finished episode).
std::vector<double> path_consistency_residuals(const std::vector<double>& values, const std::vector<double>& rewards,
                                               const std::vector<double>& log_ratios, double gamma, double tau, int d);

} // namespace ogrl::algo
