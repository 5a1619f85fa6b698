#include "ogrl/algo/gaussian_policy.hpp"

#include "ogrl/core/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ogrl::algo {

double gaussian_log_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::VectorXd& log_std)
{
    if (x.size() != mean.size() || log_std.size() != mean.size())
        throw DimensionMismatch("gaussian_log_density", static_cast<std::size_t>(mean.size()),
                                static_cast<std::size_t>(x.size()));
    const double half_log_two_pi = 0.5 * std::log(2.0 * std::numbers::pi);
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double z = (x(i) - mean(i)) * std::exp(-log_std(i));
        total += -0.5 * z * z - log_std(i) - half_log_two_pi;
    }
    return total;
}

GaussianPolicy::GaussianPolicy(nn::Mlp mean_net, action::ActionSpace space, double initial_std_fraction)
    : mean_net_(std::move(mean_net)), space_(std::move(space))
{
    if (space_.is_discrete())
        throw std::invalid_argument("a Gaussian policy needs a continuous action space");
    if (mean_net_.output_size() != space_.dim())
        throw DimensionMismatch("Gaussian policy mean output", static_cast<std::size_t>(space_.dim()),
                                static_cast<std::size_t>(mean_net_.output_size()));
    if (mean_net_.output_activation() != nn::OutputActivation::sigmoid)
        throw std::invalid_argument("Gaussian policy mean network needs a sigmoid output");
    if (!(initial_std_fraction > 0.0))
        throw std::invalid_argument("initial std fraction must be positive");
    log_std_.push_back({Eigen::MatrixXd(space_.dim(), 0), (initial_std_fraction * space_.range()).array().log().matrix()});
    apply_floor();
}

GaussianPolicy GaussianPolicy::glorot(int obs_size, const std::vector<int>& hidden, nn::HiddenActivation activation,
                                      const action::ActionSpace& space, Rng& rng, double initial_std_fraction)
{
    std::vector<int> sizes{obs_size};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(space.dim());
    return GaussianPolicy(nn::Mlp::glorot(sizes, activation, nn::OutputActivation::sigmoid, rng), space,
                          initial_std_fraction);
}

void GaussianPolicy::set_log_std(const Eigen::VectorXd& log_std)
{
    if (log_std.size() != space_.dim())
        throw DimensionMismatch("log std", static_cast<std::size_t>(space_.dim()), static_cast<std::size_t>(log_std.size()));
    log_std_.front().bias = log_std;
    apply_floor();
}

void GaussianPolicy::apply_floor()
{
    log_std_.front().bias = log_std_.front().bias.cwiseMax(std::log(min_std));
}

Eigen::VectorXd GaussianPolicy::mean(const Eigen::VectorXd& obs) const
{
    return space_.low() + space_.range().cwiseProduct(mean_net_.forward(obs));
}

Eigen::MatrixXd GaussianPolicy::mean_batch(const Eigen::MatrixXd& obs) const
{
    Eigen::MatrixXd y = mean_net_.forward_batch(obs);
    return (y.array().colwise() * space_.range().array()).colwise() + space_.low().array();
}

double GaussianPolicy::log_prob(const Eigen::VectorXd& obs, const Eigen::VectorXd& action) const
{
    return gaussian_log_density(action, mean(obs), log_std());
}

Eigen::VectorXd GaussianPolicy::log_prob_batch(const Eigen::MatrixXd& obs, const Eigen::MatrixXd& actions) const
{
    const Eigen::MatrixXd mu = mean_batch(obs);
    Eigen::VectorXd out(obs.cols());
    for (Eigen::Index j = 0; j < obs.cols(); ++j)
        out(j) = gaussian_log_density(actions.col(j), mu.col(j), log_std());
    return out;
}

Eigen::VectorXd GaussianPolicy::sample(const Eigen::VectorXd& obs, Rng& rng) const
{
    Eigen::VectorXd a = mean(obs);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        a(i) += std::exp(log_std()(i)) * standard_normal(rng);
    return space_.clip(a);
}

GaussianPolicy::Gradients GaussianPolicy::log_prob_gradients(const Eigen::MatrixXd& obs, const Eigen::MatrixXd& actions,
                                                             const Eigen::VectorXd& weights) const
{
    const Eigen::MatrixXd mu = mean_batch(obs);
    const Eigen::ArrayXd inv_var = (-2.0 * log_std()).array().exp();
    Eigen::MatrixXd d_mean(mu.rows(), mu.cols());
    Eigen::VectorXd d_log_std = Eigen::VectorXd::Zero(log_std().size());
    for (Eigen::Index j = 0; j < mu.cols(); ++j) {
        const Eigen::ArrayXd diff = (actions.col(j) - mu.col(j)).array();
        d_mean.col(j) = (weights(j) * diff * inv_var).matrix();
        d_log_std += (weights(j) * (diff.square() * inv_var - 1.0)).matrix();
    }
    Eigen::MatrixXd upstream = d_mean.array().colwise() * space_.range().array();
    Gradients g;
    g.mean = mean_net_.backward_batch(obs, upstream).params;
    g.log_std = {{Eigen::MatrixXd(space_.dim(), 0), d_log_std}};
    return g;
}

} // namespace ogrl::algo
