#include "ogrl/action/action_space.hpp"

#include "ogrl/core/errors.hpp"

#include <stdexcept>

namespace ogrl::action {

ActionSpace ActionSpace::box(Eigen::VectorXd low, Eigen::VectorXd high)
{
    if (low.size() != high.size())
        throw DimensionMismatch("ActionSpace bounds", static_cast<std::size_t>(low.size()),
                                static_cast<std::size_t>(high.size()));
    if (low.size() == 0 || (high.array() <= low.array()).any())
        throw std::invalid_argument("ActionSpace::box needs low < high in every dimension");
    ActionSpace s;
    s.low_ = std::move(low);
    s.high_ = std::move(high);
    return s;
}

ActionSpace ActionSpace::discrete(int n_actions)
{
    if (n_actions <= 0)
        throw std::invalid_argument("ActionSpace::discrete needs at least one action");
    ActionSpace s;
    s.n_discrete_ = n_actions;
    s.low_ = Eigen::VectorXd::Zero(1);
    s.high_ = Eigen::VectorXd::Constant(1, n_actions - 1);
    return s;
}

Eigen::VectorXd ActionSpace::sample(Rng& rng) const
{
    Eigen::VectorXd a(dim());
    if (is_discrete()) {
        a(0) = static_cast<double>(std::uniform_int_distribution<int>(0, n_discrete_ - 1)(rng));
        return a;
    }
    for (Eigen::Index i = 0; i < a.size(); ++i)
        a(i) = uniform(rng, low_(i), high_(i));
    return a;
}

Eigen::MatrixXd ActionSpace::sample(int k, Rng& rng) const
{
    Eigen::MatrixXd out(dim(), k);
    for (int j = 0; j < k; ++j)
        out.col(j) = sample(rng);
    return out;
}

Eigen::VectorXd ActionSpace::clip(const Eigen::VectorXd& action) const
{
    if (action.size() != dim())
        throw DimensionMismatch("ActionSpace::clip", static_cast<std::size_t>(dim()),
                                static_cast<std::size_t>(action.size()));
    return action.cwiseMax(low_).cwiseMin(high_);
}

bool ActionSpace::contains(const Eigen::VectorXd& action) const
{
    if (action.size() != dim() || !action.allFinite())
        return false;
    if (is_discrete())
        return action(0) >= 0 && action(0) < n_discrete_ && action(0) == static_cast<double>(index_of(action));
    return (action.array() >= low_.array()).all() && (action.array() <= high_.array()).all();
}

Eigen::VectorXd ActionSpace::encode(const Eigen::VectorXd& action) const
{
    if (action.size() != dim())
        throw DimensionMismatch("ActionSpace::encode", static_cast<std::size_t>(dim()),
                                static_cast<std::size_t>(action.size()));
    if (!is_discrete())
        return action;
    const int idx = index_of(action);
    if (idx < 0 || idx >= n_discrete_)
        throw std::out_of_range("discrete action index " + std::to_string(idx) + " out of range");
    Eigen::VectorXd onehot = Eigen::VectorXd::Zero(n_discrete_);
    onehot(idx) = 1.0;
    return onehot;
}

Eigen::MatrixXd ActionSpace::encode_batch(const Eigen::MatrixXd& actions) const
{
    if (!is_discrete())
        return actions;
    Eigen::MatrixXd out(encoded_size(), actions.cols());
    for (Eigen::Index j = 0; j < actions.cols(); ++j)
        out.col(j) = encode(actions.col(j));
    return out;
}

Eigen::MatrixXd ActionSpace::enumerate() const
{
    if (!is_discrete())
        throw std::logic_error("cannot enumerate a continuous action space");
    Eigen::MatrixXd out(1, n_discrete_);
    for (int i = 0; i < n_discrete_; ++i)
        out(0, i) = i;
    return out;
}

} // namespace ogrl::action
