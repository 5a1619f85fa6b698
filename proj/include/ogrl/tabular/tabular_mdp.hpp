#pragma once

#include "ogrl/core/kv_config.hpp"
#include "ogrl/core/rng.hpp"
#include "ogrl/replay/episode.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace ogrl::tabular {

/// Finite-horizon MDP with stochastic transitions and deterministic rewards.
///
/// Timesteps are 0-based here (t = 0 .. horizon-1); the transition with replay
/// timestep k corresponds to t = k - 1. Observations one-hot encode the (t, s) pair.
struct TabularMdp {
    int n_states = 0;
    int n_actions = 0;
    int horizon = 0;
    int start_state = 0;
    std::vector<std::vector<Eigen::VectorXd>> transition; // [s][a] -> distribution over s'
    Eigen::MatrixXd reward;                               // (n_states x n_actions)

    /// Throws std::invalid_argument unless every row sums to 1 within 1e-12 and rewards are finite.
    void validate() const;

    int observation_size() const { return horizon * n_states; }
    Eigen::VectorXd encode(int t, int s) const;
    /// Inverse of encode; the all-zero terminal observation decodes to t = horizon.
    std::pair<int, int> decode(const Eigen::VectorXd& features) const;

    KvConfig to_kv() const;
    static TabularMdp from_kv(const KvConfig& kv);
};

/// Default verification MDP: 12 states, 3 actions, horizon 6, sparse {0,1} rewards on a
/// few late-reachable states. Deterministic in `seed`.
TabularMdp default_verification_mdp(std::uint64_t seed = 2018);

/// Random MDP with `branching` successor states per (s, a) and Bernoulli(reward_density) rewards.
TabularMdp random_mdp(int n_states, int n_actions, int horizon, std::uint64_t seed, int branching = 3,
                      double reward_density = 0.2);

/// Finite-horizon optimal action values, q[t](s, a), with V(horizon) = 0.
struct OracleQ {
    double gamma = 1.0;
    std::vector<Eigen::MatrixXd> q;

    double value(int t, int s) const;
    double advantage(int t, int s, int a) const { return q[static_cast<std::size_t>(t)](s, a) - value(t, s); }
    int greedy_action(int t, int s) const;
    /// Largest |Q - (R + gamma * E[V'])| over all (t, s, a).
    double bellman_residual(const TabularMdp& mdp) const;
};

OracleQ value_iteration(const TabularMdp& mdp, double gamma);

/// Probability of each action at (t, s).
using TabularPolicy = std::function<Eigen::VectorXd(int t, int s)>;

TabularPolicy uniform_policy(const TabularMdp& mdp);
TabularPolicy greedy_policy(const OracleQ& oracle);

/// Exact state values of `policy`, v[t](s), by backward induction.
std::vector<Eigen::VectorXd> evaluate_policy(const TabularMdp& mdp, const TabularPolicy& policy, double gamma);

/// Probability of visiting each state at each timestep from the start state under `policy`.
std::vector<Eigen::VectorXd> visitation(const TabularMdp& mdp, const TabularPolicy& policy);

/// One episode of exactly `horizon` steps. The final next_obs is the all-zero terminal vector.
replay::Episode rollout(const TabularMdp& mdp, const TabularPolicy& policy, std::uint64_t seed,
                        std::uint64_t episode_id = 0);

} // namespace ogrl::tabular
