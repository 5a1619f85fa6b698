#pragma once

#include "ogrl/action/action_space.hpp"
#include "ogrl/core/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ogrl::action {

/// Scores candidate actions (one per column) at a single observation.
using QFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd& obs, const Eigen::MatrixXd& actions)>;

class NonFiniteValue : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ArgmaxResult {
    Eigen::VectorXd action;
    double value = 0.0;
    int evaluations = 0;
    std::vector<double> best_by_iteration; // CEM only: running best after each iteration
};

/// Index of the largest value, lowest index on ties. Throws NonFiniteValue naming the
/// offending candidate column of `candidates`.
Eigen::Index argmax_lowest_index(const Eigen::VectorXd& values, const Eigen::MatrixXd& candidates);

/// Best of k uniform samples.
ArgmaxResult uniform_argmax(const QFunction& q, const Eigen::VectorXd& obs, const ActionSpace& space, int k, Rng& rng);

/// Exact maximum over a discrete space.
ArgmaxResult exhaustive_argmax(const QFunction& q, const Eigen::VectorXd& obs, const ActionSpace& space);

/// Exhaustive on discrete spaces, k-sample uniform search on continuous ones.
ArgmaxResult sampled_max(const QFunction& q, const Eigen::VectorXd& obs, const ActionSpace& space, int k, Rng& rng);

struct CemConfig {
    int iterations = 3;
    int population = 64;
    int elite_count = 6;
    double variance_floor = 1e-6;

    void validate() const;
};

/// Cross-entropy search: uniform first population, then diagonal Gaussians refit to the
/// elites and resampled (clipped to bounds). Returns the best action seen overall and
/// evaluates exactly iterations * population candidates.
ArgmaxResult cem_argmax(const QFunction& q, const Eigen::VectorXd& obs, const ActionSpace& space, const CemConfig& cfg,
                        Rng& rng);

/// Linear decay of the exploration scale to zero over `duration_steps`.
struct ExplorationSchedule {
    std::int64_t duration_steps = 10000;
    double initial_scale = 0.2;

    double scale(std::int64_t step) const;
};

/// Gaussian noise with per-axis sigma = scale(step) * axis range, clipped to bounds.
/// On discrete spaces the scale is used as the probability of a uniform random action.
Eigen::VectorXd explore(const Eigen::VectorXd& action, std::int64_t global_step, const ExplorationSchedule& schedule,
                        const ActionSpace& space, Rng& rng);

} // namespace ogrl::action
