#include "ogrl/tabular/tabular_mdp.hpp"

#include "ogrl/core/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ogrl::tabular {

void TabularMdp::validate() const
{
    if (n_states <= 0 || n_actions <= 0 || horizon <= 0)
        throw std::invalid_argument("MDP sizes must be positive");
    if (start_state < 0 || start_state >= n_states)
        throw std::invalid_argument("start state out of range");
    if (reward.rows() != n_states || reward.cols() != n_actions)
        throw std::invalid_argument("reward table has the wrong shape");
    if (!reward.allFinite())
        throw std::invalid_argument("rewards must be finite");
    if (static_cast<int>(transition.size()) != n_states)
        throw std::invalid_argument("transition table has the wrong number of states");
    for (int s = 0; s < n_states; ++s) {
        if (static_cast<int>(transition[static_cast<std::size_t>(s)].size()) != n_actions)
            throw std::invalid_argument("transition table has the wrong number of actions");
        for (int a = 0; a < n_actions; ++a) {
            const auto& p = transition[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
            if (p.size() != n_states || (p.array() < 0.0).any() || std::abs(p.sum() - 1.0) > 1e-12)
                throw std::invalid_argument("P[" + std::to_string(s) + "][" + std::to_string(a) +
                                            "] is not a distribution");
        }
    }
}

Eigen::VectorXd TabularMdp::encode(int t, int s) const
{
    Eigen::VectorXd v = Eigen::VectorXd::Zero(observation_size());
    if (t < horizon)
        v(t * n_states + s) = 1.0;
    return v;
}

std::pair<int, int> TabularMdp::decode(const Eigen::VectorXd& features) const
{
    if (features.size() != observation_size())
        throw DimensionMismatch("TabularMdp::decode", static_cast<std::size_t>(observation_size()),
                                static_cast<std::size_t>(features.size()));
    Eigen::Index idx;
    if (features.maxCoeff(&idx) <= 0.0)
        return {horizon, 0};
    return {static_cast<int>(idx) / n_states, static_cast<int>(idx) % n_states};
}

KvConfig TabularMdp::to_kv() const
{
    KvConfig kv;
    kv.set("n_states", n_states);
    kv.set("n_actions", n_actions);
    kv.set("horizon", horizon);
    kv.set("start_state", start_state);
    auto join = [](auto&& vec, Eigen::Index n) {
        std::string out;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i)
                out += ' ';
            out += format_double(vec(i));
        }
        return out;
    };
    for (int s = 0; s < n_states; ++s)
        kv.set("reward." + std::to_string(s), join(reward.row(s), n_actions));
    for (int s = 0; s < n_states; ++s)
        for (int a = 0; a < n_actions; ++a)
            kv.set("transition." + std::to_string(s) + "." + std::to_string(a),
                   join(transition[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)], n_states));
    return kv;
}

TabularMdp TabularMdp::from_kv(const KvConfig& kv)
{
    TabularMdp m;
    auto required_int = [&](const char* key) {
        if (!kv.contains(key))
            throw std::invalid_argument(std::string("MDP file lacks '") + key + "'");
        return static_cast<int>(kv.get_int(key, 0));
    };
    m.n_states = required_int("n_states");
    m.n_actions = required_int("n_actions");
    m.horizon = required_int("horizon");
    m.start_state = required_int("start_state");
    if (m.n_states <= 0 || m.n_actions <= 0)
        throw std::invalid_argument("MDP sizes must be positive");
    m.reward = Eigen::MatrixXd::Zero(m.n_states, m.n_actions);
    m.transition.assign(static_cast<std::size_t>(m.n_states),
                        std::vector<Eigen::VectorXd>(static_cast<std::size_t>(m.n_actions)));
    for (int s = 0; s < m.n_states; ++s) {
        const auto key = "reward." + std::to_string(s);
        const auto r = kv.get_doubles(key, {});
        if (static_cast<int>(r.size()) != m.n_actions)
            throw std::invalid_argument("'" + key + "' needs " + std::to_string(m.n_actions) + " values");
        for (int a = 0; a < m.n_actions; ++a)
            m.reward(s, a) = r[static_cast<std::size_t>(a)];
        for (int a = 0; a < m.n_actions; ++a) {
            const auto tkey = "transition." + std::to_string(s) + "." + std::to_string(a);
            const auto p = kv.get_doubles(tkey, {});
            if (static_cast<int>(p.size()) != m.n_states)
                throw std::invalid_argument("'" + tkey + "' needs " + std::to_string(m.n_states) + " values");
            m.transition[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] =
                Eigen::Map<const Eigen::VectorXd>(p.data(), m.n_states);
        }
    }
    m.validate();
    return m;
}

TabularMdp random_mdp(int n_states, int n_actions, int horizon, std::uint64_t seed, int branching,
                      double reward_density)
{
    auto rng = make_rng(seed);
    TabularMdp m;
    m.n_states = n_states;
    m.n_actions = n_actions;
    m.horizon = horizon;
    m.start_state = 0;
    m.reward = Eigen::MatrixXd::Zero(n_states, n_actions);
    m.transition.assign(static_cast<std::size_t>(n_states), std::vector<Eigen::VectorXd>(static_cast<std::size_t>(n_actions)));
    std::uniform_int_distribution<int> pick_state(0, n_states - 1);
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            Eigen::VectorXd p = Eigen::VectorXd::Zero(n_states);
            for (int b = 0; b < branching; ++b)
                p(pick_state(rng)) += uniform(rng, 0.1, 1.0);
            p /= p.sum();
            // Renormalize the largest entry so the row sums to 1 to within rounding.
            Eigen::Index big;
            p.maxCoeff(&big);
            p(big) += 1.0 - p.sum();
            m.transition[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] = p;
            m.reward(s, a) = uniform(rng, 0.0, 1.0) < reward_density ? 1.0 : 0.0;
        }
    }
    m.validate();
    return m;
}

TabularMdp default_verification_mdp(std::uint64_t seed)
{
    constexpr int n_states = 12;
    constexpr int n_actions = 3;
    auto rng = make_rng(seed);
    TabularMdp m;
    m.n_states = n_states;
    m.n_actions = n_actions;
    m.horizon = 6;
    m.start_state = 0;
    m.reward = Eigen::MatrixXd::Zero(n_states, n_actions);
    m.transition.assign(n_states, std::vector<Eigen::VectorXd>(n_actions));
    // States are loosely layered: low indices near the start, rewards only on the last
    // three states, one rewarding action each. Every action moves forward with some slip.
    std::uniform_int_distribution<int> pick_action(0, n_actions - 1);
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            Eigen::VectorXd p = Eigen::VectorXd::Zero(n_states);
            const int stride = 1 + a + static_cast<int>(std::uniform_int_distribution<int>(0, 2)(rng));
            const int main = (s + stride) % n_states;
            const int slip = std::uniform_int_distribution<int>(0, n_states - 1)(rng);
            const double stay = uniform(rng, 0.6, 0.9);
            p(main) += stay;
            p(slip) += 1.0 - stay;
            m.transition[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] = p;
        }
    }
    for (int s = n_states - 3; s < n_states; ++s)
        m.reward(s, pick_action(rng)) = 1.0;
    m.validate();
    return m;
}

double OracleQ::value(int t, int s) const
{
    if (t >= static_cast<int>(q.size()))
        return 0.0;
    return q[static_cast<std::size_t>(t)].row(s).maxCoeff();
}

int OracleQ::greedy_action(int t, int s) const
{
    Eigen::Index a;
    q[static_cast<std::size_t>(t)].row(s).maxCoeff(&a);
    return static_cast<int>(a);
}

double OracleQ::bellman_residual(const TabularMdp& mdp) const
{
    double worst = 0.0;
    for (int t = 0; t < mdp.horizon; ++t) {
        Eigen::VectorXd next(mdp.n_states);
        for (int s = 0; s < mdp.n_states; ++s)
            next(s) = value(t + 1, s);
        for (int s = 0; s < mdp.n_states; ++s)
            for (int a = 0; a < mdp.n_actions; ++a) {
                const double backup = mdp.reward(s, a) +
                                      gamma * mdp.transition[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)].dot(next);
                worst = std::max(worst, std::abs(q[static_cast<std::size_t>(t)](s, a) - backup));
            }
    }
    return worst;
}

OracleQ value_iteration(const TabularMdp& mdp, double gamma)
{
    mdp.validate();
    OracleQ oracle;
    oracle.gamma = gamma;
    oracle.q.assign(static_cast<std::size_t>(mdp.horizon), Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_actions));
    Eigen::VectorXd next = Eigen::VectorXd::Zero(mdp.n_states);
    for (int t = mdp.horizon - 1; t >= 0; --t) {
        auto& qt = oracle.q[static_cast<std::size_t>(t)];
        for (int s = 0; s < mdp.n_states; ++s)
            for (int a = 0; a < mdp.n_actions; ++a)
                qt(s, a) = mdp.reward(s, a) +
                           gamma * mdp.transition[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)].dot(next);
        next = qt.rowwise().maxCoeff();
    }
    return oracle;
}

TabularPolicy uniform_policy(const TabularMdp& mdp)
{
    const int n = mdp.n_actions;
    return [n](int, int) { return Eigen::VectorXd(Eigen::VectorXd::Constant(n, 1.0 / n)); };
}

TabularPolicy greedy_policy(const OracleQ& oracle)
{
    return [oracle](int t, int s) {
        Eigen::VectorXd p = Eigen::VectorXd::Zero(oracle.q.front().cols());
        p(oracle.greedy_action(t, s)) = 1.0;
        return p;
    };
}

std::vector<Eigen::VectorXd> evaluate_policy(const TabularMdp& mdp, const TabularPolicy& policy, double gamma)
{
    std::vector<Eigen::VectorXd> v(static_cast<std::size_t>(mdp.horizon) + 1, Eigen::VectorXd::Zero(mdp.n_states));
    for (int t = mdp.horizon - 1; t >= 0; --t) {
        for (int s = 0; s < mdp.n_states; ++s) {
            const Eigen::VectorXd pi = policy(t, s);
            double total = 0.0;
            for (int a = 0; a < mdp.n_actions; ++a)
                total += pi(a) * (mdp.reward(s, a) +
                                  gamma * mdp.transition[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)].dot(
                                              v[static_cast<std::size_t>(t) + 1]));
            v[static_cast<std::size_t>(t)](s) = total;
        }
    }
    return v;
}

std::vector<Eigen::VectorXd> visitation(const TabularMdp& mdp, const TabularPolicy& policy)
{
    std::vector<Eigen::VectorXd> d(static_cast<std::size_t>(mdp.horizon), Eigen::VectorXd::Zero(mdp.n_states));
    d[0](mdp.start_state) = 1.0;
    for (int t = 0; t + 1 < mdp.horizon; ++t) {
        for (int s = 0; s < mdp.n_states; ++s) {
            const double mass = d[static_cast<std::size_t>(t)](s);
            if (mass == 0.0)
                continue;
            const Eigen::VectorXd pi = policy(t, s);
            for (int a = 0; a < mdp.n_actions; ++a)
                d[static_cast<std::size_t>(t) + 1] +=
                    mass * pi(a) * mdp.transition[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
        }
    }
    return d;
}

namespace {

int sample_index(const Eigen::VectorXd& p, Rng& rng)
{
    const double u = uniform(rng, 0.0, 1.0);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        acc += p(i);
        if (u < acc)
            return static_cast<int>(i);
    }
    // Rounding left u above the last partial sum: take the last non-zero entry.
    for (Eigen::Index i = p.size(); i-- > 0;)
        if (p(i) > 0.0)
            return static_cast<int>(i);
    return 0;
}

} // namespace

replay::Episode rollout(const TabularMdp& mdp, const TabularPolicy& policy, std::uint64_t seed,
                        std::uint64_t episode_id)
{
    auto rng = make_rng(seed);
    int s = mdp.start_state;
    replay::EpisodeBuilder builder(episode_id, replay::make_features(mdp.encode(0, s)));
    for (int t = 0; t < mdp.horizon; ++t) {
        const int a = sample_index(policy(t, s), rng);
        const double r = mdp.reward(s, a);
        const int next = sample_index(mdp.transition[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)], rng);
        const bool done = t + 1 == mdp.horizon;
        builder.add(Eigen::VectorXd::Constant(1, a), r, replay::make_features(mdp.encode(t + 1, next)), done);
        s = next;
    }
    return std::move(builder).finish();
}

} // namespace ogrl::tabular
