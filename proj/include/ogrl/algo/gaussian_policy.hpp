#pragma once

#include "ogrl/action/action_space.hpp"
#include "ogrl/core/rng.hpp"
#include "ogrl/nn/mlp.hpp"

#include <Eigen/Dense>

namespace ogrl::algo {

/// log N(x; mean, diag(exp(log_std))^2).
double gaussian_log_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::VectorXd& log_std);

/// Diagonal Gaussian over a box action space. The mean is a sigmoid network scaled into the
/// bounds; the log standard deviations are free parameters shared across states.
class GaussianPolicy {
public:
    static constexpr double min_std = 1e-3;

    GaussianPolicy(nn::Mlp mean_net, action::ActionSpace space, double initial_std_fraction = 0.3);

    static GaussianPolicy glorot(int obs_size, const std::vector<int>& hidden, nn::HiddenActivation activation,
                                 const action::ActionSpace& space, Rng& rng, double initial_std_fraction = 0.3);

    const action::ActionSpace& space() const noexcept { return space_; }
    const nn::Mlp& mean_net() const noexcept { return mean_net_; }
    nn::Mlp& mean_net() noexcept { return mean_net_; }

    /// Stored as a single bias-only layer so an optimizer can update it.
    const nn::Parameters& log_std_params() const noexcept { return log_std_; }
    nn::Parameters& log_std_params() noexcept { return log_std_; }
    const Eigen::VectorXd& log_std() const noexcept { return log_std_.front().bias; }
    void set_log_std(const Eigen::VectorXd& log_std);
    /// Raises every log std to at least log(min_std).
    void apply_floor();

    Eigen::VectorXd mean(const Eigen::VectorXd& obs) const;
    Eigen::MatrixXd mean_batch(const Eigen::MatrixXd& obs) const;
    double log_prob(const Eigen::VectorXd& obs, const Eigen::VectorXd& action) const;
    Eigen::VectorXd log_prob_batch(const Eigen::MatrixXd& obs, const Eigen::MatrixXd& actions) const;
    /// Mean plus Gaussian noise, clipped to the bounds.
    Eigen::VectorXd sample(const Eigen::VectorXd& obs, Rng& rng) const;

    struct Gradients {
        nn::Parameters mean;
        nn::Parameters log_std;
    };
    /// Gradient of sum_j weights_j * log pi(actions_j | obs_j).
    Gradients log_prob_gradients(const Eigen::MatrixXd& obs, const Eigen::MatrixXd& actions,
                                 const Eigen::VectorXd& weights) const;

    bool operator==(const GaussianPolicy& other) const
    {
        return mean_net_ == other.mean_net_ && log_std_ == other.log_std_;
    }

private:
    nn::Mlp mean_net_;
    action::ActionSpace space_;
    nn::Parameters log_std_;
};

} // namespace ogrl::algo
