#include "ogrl/algo/targets.hpp"

#include "ogrl/action/action_select.hpp"
#include "ogrl/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ogrl::algo {

Eigen::MatrixXd q_inputs(const Eigen::MatrixXd& obs, const Eigen::MatrixXd& actions, const action::ActionSpace& space)
{
    if (obs.cols() != actions.cols())
        throw DimensionMismatch("q_inputs columns", static_cast<std::size_t>(obs.cols()),
                                static_cast<std::size_t>(actions.cols()));
    Eigen::MatrixXd x(obs.rows() + space.encoded_size(), obs.cols());
    x.topRows(obs.rows()) = obs;
    x.bottomRows(space.encoded_size()) = space.encode_batch(actions);
    return x;
}

Eigen::VectorXd q_values(const nn::Mlp& q, const Eigen::MatrixXd& obs, const Eigen::MatrixXd& actions,
                         const action::ActionSpace& space)
{
    return q.forward_batch(q_inputs(obs, actions, space)).row(0).transpose();
}

action::QFunction q_function(const nn::Mlp& q, const action::ActionSpace& space)
{
    return [&q, &space](const Eigen::VectorXd& obs, const Eigen::MatrixXd& actions) -> Eigen::VectorXd {
        return q.forward_shared_prefix(obs, space.encode_batch(actions), static_cast<int>(actions.cols()))
            .row(0)
            .transpose();
    };
}

RegressionStep regression_gradients(const nn::Mlp& net, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets)
{
    if (targets.size() != inputs.cols())
        throw DimensionMismatch("regression targets", static_cast<std::size_t>(inputs.cols()),
                                static_cast<std::size_t>(targets.size()));
    const auto n = static_cast<double>(targets.size());
    const Eigen::RowVectorXd diff = net.forward_batch(inputs).row(0) - targets.transpose();
    RegressionStep out;
    out.loss = 0.5 * diff.squaredNorm() / n;
    out.grads = net.backward_batch(inputs, diff / n);
    return out;
}

namespace {

double wrap_pi(double a)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a + std::numbers::pi, two_pi);
    if (a < 0.0)
        a += two_pi;
    return a - std::numbers::pi;
}

void require_complete(const replay::Episode& e)
{
    replay::validate_episode(e);
}

} // namespace

Eigen::VectorXd pose_displacement_action(const replay::Pose& from, const replay::Pose& to, const Eigen::Vector4d& scale)
{
    Eigen::Vector4d d(to.x - from.x, to.y - from.y, to.z - from.z, wrap_pi(to.phi - from.phi));
    return d.cwiseQuotient(scale).cwiseMax(-1.0).cwiseMin(1.0);
}

std::vector<SupervisedSample> supervised_targets(const EpisodeBatch& episodes, const Eigen::Vector4d& scale)
{
    std::vector<SupervisedSample> out;
    for (const auto* e : episodes) {
        require_complete(*e);
        if (!e->final_pose)
            throw std::invalid_argument("episode " + std::to_string(e->episode_id) + " has no final gripper pose");
        for (const auto& tr : e->transitions) {
            if (!tr.gripper_pose)
                throw std::invalid_argument("episode " + std::to_string(e->episode_id) + " step " +
                                            std::to_string(tr.timestep) + " has no gripper pose");
            out.push_back({tr.obs, pose_displacement_action(*tr.gripper_pose, *e->final_pose, scale), e->outcome});
        }
    }
    return out;
}

TargetTable mc_targets(const EpisodeBatch& episodes, double gamma)
{
    TargetTable out;
    out.reserve(episodes.size());
    for (const auto* e : episodes) {
        require_complete(*e);
        std::vector<double> g(e->size());
        double next = 0.0;
        for (std::size_t i = e->size(); i-- > 0;) {
            next = e->transitions[i].reward + gamma * next;
            g[i] = next;
        }
        out.push_back(std::move(g));
    }
    return out;
}

TargetTable corr_mc_targets(const EpisodeBatch& episodes, double gamma, double nu, const AdvantageFn& advantage)
{
    TargetTable out;
    out.reserve(episodes.size());
    for (const auto* e : episodes) {
        require_complete(*e);
        const Eigen::VectorXd adv =
            nu == 0.0 ? Eigen::VectorXd::Zero(static_cast<Eigen::Index>(e->size())) : advantage(*e);
        if (adv.size() != static_cast<Eigen::Index>(e->size()))
            throw DimensionMismatch("advantage per step", e->size(), static_cast<std::size_t>(adv.size()));
        std::vector<double> g(e->size());
        double next = 0.0;
        for (std::size_t i = e->size(); i-- > 0;) {
            const double tail = i + 1 < e->size() ? next - nu * adv(static_cast<Eigen::Index>(i + 1)) : 0.0;
            next = e->transitions[i].reward + gamma * tail;
            g[i] = next;
        }
        out.push_back(std::move(g));
    }
    return out;
}

AdvantageFn network_advantage(const nn::Mlp& q, const action::ActionSpace& space, int k, Rng& rng)
{
    return [&q, &space, k, &rng](const replay::Episode& e) {
        const auto n = static_cast<Eigen::Index>(e.size());
        Eigen::MatrixXd obs(q.input_size() - space.encoded_size(), n);
        Eigen::MatrixXd actions(space.dim(), n);
        for (Eigen::Index i = 0; i < n; ++i) {
            obs.col(i) = *e.transitions[static_cast<std::size_t>(i)].obs;
            actions.col(i) = e.transitions[static_cast<std::size_t>(i)].action;
        }
        Eigen::VectorXd adv = q_values(q, obs, actions, space);
        const auto qf = q_function(q, space);
        for (Eigen::Index i = 0; i < n; ++i)
            adv(i) -= action::sampled_max(qf, obs.col(i), space, k, rng).value;
        return adv;
    };
}

Eigen::VectorXd dql_targets(const TransitionBatch& batch, const nn::Mlp& q_net, const nn::Mlp& q_target,
                            const action::ActionSpace& space, double gamma, int k, Rng& rng)
{
    const auto n = static_cast<Eigen::Index>(batch.size());
    Eigen::VectorXd y(n);
    std::vector<Eigen::Index> boot;
    const auto qf = q_function(q_net, space);
    const int obs_rows = q_net.input_size() - space.encoded_size();
    Eigen::MatrixXd next_obs(obs_rows, n);
    Eigen::MatrixXd next_actions(space.dim(), n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& tr = *batch[static_cast<std::size_t>(j)];
        y(j) = tr.reward;
        if (tr.done || gamma == 0.0)
            continue;
        const auto col = static_cast<Eigen::Index>(boot.size());
        next_obs.col(col) = *tr.next_obs;
        next_actions.col(col) = action::sampled_max(qf, *tr.next_obs, space, k, rng).action;
        boot.push_back(j);
    }
    if (!boot.empty()) {
        const auto m = static_cast<Eigen::Index>(boot.size());
        const Eigen::VectorXd v = q_values(q_target, next_obs.leftCols(m), next_actions.leftCols(m), space);
        for (Eigen::Index c = 0; c < m; ++c)
            y(boot[static_cast<std::size_t>(c)]) += gamma * v(c);
    }
    return y;
}

double nu_schedule(std::int64_t global_step, std::int64_t anneal_steps)
{
    if (anneal_steps <= 0)
        throw std::invalid_argument("nu anneal steps must be positive");
    if (global_step <= 0)
        return 0.0;
    if (global_step >= anneal_steps)
        return 1.0;
    return static_cast<double>(global_step) / static_cast<double>(anneal_steps);
}

std::vector<double> path_consistency_residuals(const std::vector<double>& values, const std::vector<double>& rewards,
                                               const std::vector<double>& log_ratios, double gamma, double tau, int d)
{
    const auto T = rewards.size();
    if (values.size() != T + 1)
        throw DimensionMismatch("path consistency values", T + 1, values.size());
    if (log_ratios.size() != T)
        throw DimensionMismatch("path consistency log ratios", T, log_ratios.size());
    if (d < 0)
        throw std::invalid_argument("consistency window d must be >= 0, got " + std::to_string(d));
    std::vector<double> residuals(T);
    for (std::size_t t = 0; t < T; ++t) {
        const std::size_t len = d == 0 ? T - t : std::min<std::size_t>(static_cast<std::size_t>(d), T - t);
        double discounted = 0.0;
        double disc = 1.0;
        for (std::size_t i = t; i < t + len; ++i) {
            discounted += disc * (rewards[i] - tau * log_ratios[i]);
            disc *= gamma;
        }
        residuals[t] = values[t] - disc * values[t + len] - discounted;
    }
    return residuals;
}

} // namespace ogrl::algo
