#include "ogrl/action/action_select.hpp"

#include "ogrl/core/errors.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ogrl::action {

namespace {

Eigen::VectorXd evaluate(const QFunction& q, const Eigen::VectorXd& obs, const Eigen::MatrixXd& candidates)
{
    Eigen::VectorXd values = q(obs, candidates);
    if (values.size() != candidates.cols())
        throw DimensionMismatch("Q evaluation", static_cast<std::size_t>(candidates.cols()),
                                static_cast<std::size_t>(values.size()));
    return values;
}

} // namespace

Eigen::Index argmax_lowest_index(const Eigen::VectorXd& values, const Eigen::MatrixXd& candidates)
{
    Eigen::Index best = 0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values(i))) {
            std::ostringstream msg;
            msg << "non-finite Q value " << values(i) << " for action [" << candidates.col(i).transpose() << "]";
            throw NonFiniteValue(msg.str());
        }
        if (values(i) > values(best))
            best = i;
    }
    return best;
}

ArgmaxResult uniform_argmax(const QFunction& q, const Eigen::VectorXd& obs, const ActionSpace& space, int k, Rng& rng)
{
    if (k < 1)
        throw std::invalid_argument("uniform_argmax needs k >= 1");
    const Eigen::MatrixXd candidates = space.sample(k, rng);
    const Eigen::VectorXd values = evaluate(q, obs, candidates);
    const auto best = argmax_lowest_index(values, candidates);
    return {candidates.col(best), values(best), k, {}};
}

ArgmaxResult exhaustive_argmax(const QFunction& q, const Eigen::VectorXd& obs, const ActionSpace& space)
{
    const Eigen::MatrixXd candidates = space.enumerate();
    const Eigen::VectorXd values = evaluate(q, obs, candidates);
    const auto best = argmax_lowest_index(values, candidates);
    return {candidates.col(best), values(best), static_cast<int>(candidates.cols()), {}};
}

ArgmaxResult sampled_max(const QFunction& q, const Eigen::VectorXd& obs, const ActionSpace& space, int k, Rng& rng)
{
    return space.is_discrete() ? exhaustive_argmax(q, obs, space) : uniform_argmax(q, obs, space, k, rng);
}

void CemConfig::validate() const
{
    if (iterations < 1)
        throw std::invalid_argument("CEM needs at least one iteration");
    if (!(0 < elite_count && elite_count < population))
        throw std::invalid_argument("CEM needs 0 < elite_count < population");
    if (!(variance_floor > 0.0))
        throw std::invalid_argument("CEM variance floor must be positive");
}

ArgmaxResult cem_argmax(const QFunction& q, const Eigen::VectorXd& obs, const ActionSpace& space, const CemConfig& cfg,
                        Rng& rng)
{
    cfg.validate();
    if (space.is_discrete())
        throw std::invalid_argument("CEM requires a continuous action space");

    const auto dim = space.dim();
    ArgmaxResult result;
    result.value = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd stddev = Eigen::VectorXd::Zero(dim);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(cfg.population));

    for (int it = 0; it < cfg.iterations; ++it) {
        Eigen::MatrixXd candidates(dim, cfg.population);
        if (it == 0) {
            candidates = space.sample(cfg.population, rng);
        } else {
            for (int j = 0; j < cfg.population; ++j) {
                for (int d = 0; d < dim; ++d)
                    candidates(d, j) = mean(d) + stddev(d) * standard_normal(rng);
                candidates.col(j) = space.clip(candidates.col(j));
            }
        }
        const Eigen::VectorXd values = evaluate(q, obs, candidates);
        result.evaluations += cfg.population;

        const auto best = argmax_lowest_index(values, candidates);
        if (it == 0 || values(best) > result.value) {
            result.value = values(best);
            result.action = candidates.col(best);
        }
        result.best_by_iteration.push_back(result.value);

        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values(a) > values(b); });
        mean.setZero();
        for (int e = 0; e < cfg.elite_count; ++e)
            mean += candidates.col(order[static_cast<std::size_t>(e)]);
        mean /= cfg.elite_count;
        Eigen::VectorXd var = Eigen::VectorXd::Zero(dim);
        for (int e = 0; e < cfg.elite_count; ++e)
            var += (candidates.col(order[static_cast<std::size_t>(e)]) - mean).array().square().matrix();
        var /= cfg.elite_count;
        stddev = var.cwiseMax(cfg.variance_floor).cwiseSqrt();
    }
    return result;
}

double ExplorationSchedule::scale(std::int64_t step) const
{
    if (duration_steps <= 0)
        throw std::invalid_argument("exploration duration must be positive");
    const double frac = static_cast<double>(step) / static_cast<double>(duration_steps);
    return initial_scale * std::max(0.0, 1.0 - frac);
}

Eigen::VectorXd explore(const Eigen::VectorXd& action, std::int64_t global_step, const ExplorationSchedule& schedule,
                        const ActionSpace& space, Rng& rng)
{
    const double s = schedule.scale(global_step);
    if (s <= 0.0)
        return action;
    if (space.is_discrete())
        return uniform(rng, 0.0, 1.0) < s ? space.sample(rng) : action;
    Eigen::VectorXd noisy = action;
    const Eigen::VectorXd range = space.range();
    for (Eigen::Index i = 0; i < noisy.size(); ++i)
        noisy(i) += s * range(i) * standard_normal(rng);
    return space.clip(noisy);
}

} // namespace ogrl::action
