#pragma once

#include "ogrl/core/rng.hpp"

#include <Eigen/Dense>

namespace ogrl::action {

/// Either a box of continuous actions or a finite set of indexed actions.
///
/// Discrete actions are carried as a length-1 vector holding the index and are
/// one-hot encoded when fed to a network.
class ActionSpace {
public:
    static ActionSpace box(Eigen::VectorXd low, Eigen::VectorXd high);
    static ActionSpace unit_box(int dim) { return box(-Eigen::VectorXd::Ones(dim), Eigen::VectorXd::Ones(dim)); }
    static ActionSpace discrete(int n_actions);

    bool is_discrete() const noexcept { return n_discrete_ > 0; }
    int dim() const noexcept { return is_discrete() ? 1 : static_cast<int>(low_.size()); }
    int encoded_size() const noexcept { return is_discrete() ? n_discrete_ : static_cast<int>(low_.size()); }
    int n_actions() const noexcept { return n_discrete_; }
    const Eigen::VectorXd& low() const noexcept { return low_; }
    const Eigen::VectorXd& high() const noexcept { return high_; }
    Eigen::VectorXd range() const { return high_ - low_; }

    Eigen::VectorXd sample(Rng& rng) const;
    /// k samples, one per column, drawn in column order.
    Eigen::MatrixXd sample(int k, Rng& rng) const;
    Eigen::VectorXd clip(const Eigen::VectorXd& action) const;
    bool contains(const Eigen::VectorXd& action) const;

    Eigen::VectorXd encode(const Eigen::VectorXd& action) const;
    Eigen::MatrixXd encode_batch(const Eigen::MatrixXd& actions) const;
    /// Every discrete action, one per column.
    Eigen::MatrixXd enumerate() const;

    static int index_of(const Eigen::VectorXd& action) { return static_cast<int>(action(0)); }

private:
    Eigen::VectorXd low_;
    Eigen::VectorXd high_;
    int n_discrete_ = 0;
};

} // namespace ogrl::action
