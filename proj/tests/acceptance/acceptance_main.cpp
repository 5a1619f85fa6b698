#include "ogrl/algo/estimator.hpp"
#include "ogrl/algo/targets.hpp"
#include "ogrl/core/binary_io.hpp"
#include "ogrl/core/errors.hpp"
#include "ogrl/env/collect.hpp"
#include "ogrl/harness/report.hpp"
#include "ogrl/harness/sweep.hpp"
#include "ogrl/harness/training.hpp"
#include "ogrl/nn/checkpoint.hpp"
#include "ogrl/replay/pool_file.hpp"
#include "ogrl/tabular/tabular_mdp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace ogrl;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& ex) {
        o = {false, std::string("threw: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass)
        ++failures;
    std::printf("%s  %-28s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
}

void info(const std::string& name, const std::string& detail)
{
    std::printf("INFO  %-28s %s\n", name.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
    return buf;
}

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("ogrl_acceptance_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// Q network that reproduces a table exactly: one relu unit per (t, s, a) cell fires only
// when both its one-hot observation and action inputs are set.
nn::Mlp table_network(const tabular::TabularMdp& mdp, const tabular::OracleQ& oracle)
{
    const int n_obs = mdp.observation_size();
    const int cells = n_obs * mdp.n_actions;
    nn::Mlp q({n_obs + mdp.n_actions, cells, 1}, nn::HiddenActivation::relu, nn::OutputActivation::identity);
    for (int o = 0; o < n_obs; ++o)
        for (int a = 0; a < mdp.n_actions; ++a) {
            const int c = o * mdp.n_actions + a;
            q.params()[0].weight(c, o) = 1.0;
            q.params()[0].weight(c, n_obs + a) = 1.0;
            q.params()[0].bias(c) = -1.0;
            q.params()[1].weight(0, c) = oracle.q[static_cast<std::size_t>(o / mdp.n_states)](o % mdp.n_states, a);
        }
    return q;
}

Outcome gradient_exactness()
{
    Rng rng = make_rng(2024);
    const std::vector<std::vector<int>> shapes = {{8, 64, 64, 64, 1}, {20, 64, 32, 4}, {6, 16, 1}, {12, 64, 64, 3}};
    const int probes = 100;
    double worst = 0.0;
    for (int p = 0; p < probes; ++p) {
        const auto& shape = shapes[static_cast<std::size_t>(p) % shapes.size()];
        const auto hidden = p % 2 ? nn::HiddenActivation::tanh : nn::HiddenActivation::relu;
        const auto output = p % 3 ? nn::OutputActivation::identity : nn::OutputActivation::sigmoid;
        auto net = nn::Mlp::glorot(shape, hidden, output, rng);
        for (auto& layer : net.params())
            for (Eigen::Index i = 0; i < layer.bias.size(); ++i)
                layer.bias(i) = uniform(rng, -0.1, 0.1);
        Eigen::VectorXd x(shape.front()), up(shape.back());
        for (auto& v : x)
            v = uniform(rng, -1.0, 1.0);
        for (auto& v : up)
            v = uniform(rng, -1.0, 1.0);
        const auto g = net.backward(x, up);
        auto loss = [&] { return up.dot(net.forward(x)); };

        // Either a parameter or an input coordinate.
        const auto l = std::uniform_int_distribution<std::size_t>(0, net.params().size())(rng);
        double analytic = 0.0, numeric = 0.0;
        const double h = 1e-5;
        if (l == net.params().size()) {
            const auto i = std::uniform_int_distribution<Eigen::Index>(0, x.size() - 1)(rng);
            analytic = g.input(i);
            const double saved = x(i);
            x(i) = saved + h;
            const double plus = loss();
            x(i) = saved - h;
            const double minus = loss();
            x(i) = saved;
            numeric = (plus - minus) / (2 * h);
        } else {
            auto& layer = net.params()[l];
            const bool use_bias = std::uniform_int_distribution<int>(0, 4)(rng) == 0;
            double* data = use_bias ? layer.bias.data() : layer.weight.data();
            const Eigen::Index n = use_bias ? layer.bias.size() : layer.weight.size();
            const auto i = std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng);
            analytic = use_bias ? g.params[l].bias(i) : g.params[l].weight.data()[i];
            const double saved = data[i];
            data[i] = saved + h;
            const double plus = loss();
            data[i] = saved - h;
            const double minus = loss();
            data[i] = saved;
            numeric = (plus - minus) / (2 * h);
        }
        const double rel = std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-6});
        worst = std::max(worst, rel);
    }
    return {worst < 1e-5, fmt("max relative error %.2e over %g probes", worst, probes)};
}

Outcome tabular_dql_convergence()
{
    const auto mdp = tabular::default_verification_mdp();
    const double gamma = 0.9;
    const auto oracle = tabular::value_iteration(mdp, gamma);
    const auto reach = tabular::visitation(mdp, tabular::uniform_policy(mdp));
    const auto space = action::ActionSpace::discrete(mdp.n_actions);

    replay::ReplayPool pool;
    for (std::uint64_t i = 0; i < 50000; ++i)
        pool.add_episode(tabular::rollout(mdp, tabular::uniform_policy(mdp), derive_seed(11, i), i));

    algo::AlgoConfig cfg;
    cfg.gamma = gamma;
    cfg.batch_transitions = 256;
    cfg.optimizer.learning_rate = 1e-3;
    auto state = algo::make_algo_state(algo::EstimatorKind::dql, cfg, mdp.observation_size(), space, 3);
    Rng rng = make_rng(5);
    const int updates = 20000;
    for (int step = 1; step <= updates; ++step) {
        state.set_learning_rate(step <= 8000 ? 1e-3 : step <= 14000 ? 1e-3 / 3 : 1e-4);
        algo::train_step(state, pool, rng);
    }

    double worst = 0.0;
    int cells = 0;
    for (int t = 0; t < mdp.horizon; ++t)
        for (int s = 0; s < mdp.n_states; ++s) {
            if (reach[static_cast<std::size_t>(t)](s) <= 0.0)
                continue;
            const Eigen::MatrixXd obs = mdp.encode(t, s).replicate(1, mdp.n_actions);
            const auto q = algo::q_values(*state.q_net, obs, space.enumerate(), space);
            for (int a = 0; a < mdp.n_actions; ++a) {
                worst = std::max(worst, std::abs(q(a) - oracle.q[static_cast<std::size_t>(t)](s, a)));
                ++cells;
            }
        }
    return {worst < 0.05, fmt("max |Q - Q*| = %.4f over %g reachable (t,s,a) after %g updates", worst, cells, updates)};
}

Outcome corrected_mc_unbiased()
{
    const auto mdp = tabular::default_verification_mdp();
    const double gamma = 0.9;
    const auto oracle = tabular::value_iteration(mdp, gamma);
    const auto space = action::ActionSpace::discrete(mdp.n_actions);
    const auto q_star = table_network(mdp, oracle);

    std::vector<replay::Episode> episodes;
    for (std::uint64_t i = 0; i < 10000; ++i)
        episodes.push_back(tabular::rollout(mdp, tabular::uniform_policy(mdp), derive_seed(22, i), i));
    const auto batch = algo::episode_ptrs(episodes);
    Rng rng = make_rng(1);
    const auto corrected = algo::corr_mc_targets(batch, gamma, 1.0, algo::network_advantage(q_star, space, 16, rng));
    const auto plain = algo::mc_targets(batch, gamma);

    bool within = true;
    std::string detail;
    const int a_star = oracle.greedy_action(0, mdp.start_state);
    double mc_dev_star = 0.0, corr_dev_star = 0.0;
    for (int a = 0; a < mdp.n_actions; ++a) {
        double n = 0, sum = 0, sum_sq = 0, mc_sum = 0;
        for (std::size_t e = 0; e < episodes.size(); ++e) {
            if (episodes[e].transitions[0].action(0) != a)
                continue;
            ++n;
            sum += corrected[e][0];
            sum_sq += corrected[e][0] * corrected[e][0];
            mc_sum += plain[e][0];
        }
        const double mean = sum / n;
        const double se = std::sqrt((sum_sq / n - mean * mean) / n);
        const double truth = oracle.q[0](mdp.start_state, a);
        const double dev = std::abs(mean - truth);
        const double mc_dev = std::abs(mc_sum / n - truth);
        within = within && dev <= 3 * se;
        if (a == a_star) {
            mc_dev_star = mc_dev;
            corr_dev_star = dev;
        }
        detail += fmt("a=%g: Q*=%.4f corr=%.4f (%.1f se) ", a, truth, mean, se > 0 ? dev / se : 0.0) +
                  fmt("mc=%.4f; ", mc_sum / n);
    }
    const bool bias_shown = mc_dev_star > corr_dev_star;
    detail += fmt("at a*: |mc - Q*| = %.4f > |corr - Q*| = %.4f", mc_dev_star, corr_dev_star);
    return {within && bias_shown, detail};
}

Outcome nu_zero_reduction()
{
    Rng rng = make_rng(31);
    const auto space = action::ActionSpace::discrete(4);
    std::vector<replay::Episode> episodes;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const int n_states = 5 + static_cast<int>(i % 7);
        const auto mdp = tabular::random_mdp(n_states, 4, 3 + static_cast<int>(i % 10), derive_seed(32, i), 3, 0.4);
        auto ep = tabular::rollout(mdp, tabular::uniform_policy(mdp), derive_seed(33, i), i);
        for (auto& tr : ep.transitions)
            tr.reward = uniform(rng, -2.0, 2.0);
        ep.outcome = ep.transitions.back().reward;
        episodes.push_back(std::move(ep));
    }
    const algo::AdvantageFn noisy = [&rng](const replay::Episode& e) {
        Eigen::VectorXd a(static_cast<Eigen::Index>(e.size()));
        for (auto& v : a)
            v = uniform(rng, -1.0, 0.0);
        return a;
    };
    const auto batch = algo::episode_ptrs(episodes);
    int mismatches = 0;
    for (double gamma : {0.9, 0.99, 1.0}) {
        const auto corr = algo::corr_mc_targets(batch, gamma, 0.0, noisy);
        const auto mc = algo::mc_targets(batch, gamma);
        for (std::size_t e = 0; e < episodes.size(); ++e)
            for (std::size_t t = 0; t < corr[e].size(); ++t)
                mismatches += std::memcmp(&corr[e][t], &mc[e][t], sizeof(double)) != 0;
    }
    return {mismatches == 0, fmt("%g bitwise mismatches over 1000 episodes x 3 discounts", mismatches)};
}

Outcome telescoping_identity()
{
    Rng rng = make_rng(41);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const int n_states = 3 + k % 9;
        const int horizon = 2 + k % 14;
        const double gamma = uniform(rng, 0.5, 1.0);
        Eigen::MatrixXd table(horizon + 1, n_states);
        for (auto& v : table.reshaped())
            v = uniform(rng, -5.0, 5.0);
        table.row(horizon).setZero();
        std::vector<int> states(static_cast<std::size_t>(horizon + 1));
        for (auto& s : states)
            s = std::uniform_int_distribution<int>(0, n_states - 1)(rng);
        std::vector<double> values(static_cast<std::size_t>(horizon + 1));
        for (int t = 0; t <= horizon; ++t)
            values[static_cast<std::size_t>(t)] = table(t, states[static_cast<std::size_t>(t)]);

        // V(s_t) = sum_i gamma^(i-t) (V(s_i) - gamma V(s_i+1)) + gamma^(T-t) V(s_T)
        for (int t = 0; t < horizon; ++t) {
            double sum = 0.0, disc = 1.0;
            for (int i = t; i < horizon; ++i) {
                sum += disc * (values[static_cast<std::size_t>(i)] - gamma * values[static_cast<std::size_t>(i) + 1]);
                disc *= gamma;
            }
            worst = std::max(worst, std::abs(sum - values[static_cast<std::size_t>(t)]));
        }

        // The same cancellation through the path-consistency residual with r_i = V_i - gamma V_i+1.
        std::vector<double> rewards(static_cast<std::size_t>(horizon)), ratios(static_cast<std::size_t>(horizon));
        for (int i = 0; i < horizon; ++i) {
            rewards[static_cast<std::size_t>(i)] =
                values[static_cast<std::size_t>(i)] - gamma * values[static_cast<std::size_t>(i) + 1];
            ratios[static_cast<std::size_t>(i)] = uniform(rng, -3.0, 0.0);
        }
        for (int d : {0, 1, 3, horizon})
            for (double r : algo::path_consistency_residuals(values, rewards, ratios, gamma, 0.0, d))
                worst = std::max(worst, std::abs(r));
    }
    return {worst < 1e-10, fmt("max |sum - V(s_t)| = %.2e over 100 tables", worst)};
}

Outcome cem_quality(int dim, int trials, bool* count_ok)
{
    const auto space = action::ActionSpace::unit_box(dim);
    int hits = 0;
    bool exact = true;
    for (int k = 0; k < trials; ++k) {
        Rng rng = make_rng(derive_seed(51, static_cast<std::uint64_t>(k)));
        Eigen::VectorXd center(dim);
        for (auto& v : center)
            v = uniform(rng, -0.7, 0.7);
        int evaluations = 0;
        const action::QFunction bowl = [&](const Eigen::VectorXd&, const Eigen::MatrixXd& a) {
            evaluations += static_cast<int>(a.cols());
            return Eigen::VectorXd(-(a.colwise() - center).colwise().squaredNorm().transpose());
        };
        const auto r = action::cem_argmax(bowl, Eigen::VectorXd(), space, action::CemConfig{3, 64, 6}, rng);
        hits += (r.action - center).norm() <= 0.05;
        exact = exact && evaluations == 192 && r.evaluations == 192;
    }
    *count_ok = exact;
    return {hits >= 95 * trials / 100 && exact,
            fmt("%g/%g trials within 0.05 of the maximizer", hits, trials) +
                (exact ? ", 192 evaluations per call" : ", evaluation count off")};
}

Outcome ddpg_actor_mechanics()
{
    const int obs_size = 3;
    const auto space = action::ActionSpace::unit_box(2);
    const Eigen::Vector2d a_star(0.35, -0.25);
    algo::AlgoConfig cfg;
    cfg.hidden = {32, 32};
    auto state = algo::make_algo_state(algo::EstimatorKind::ddpg, cfg, obs_size, space, 7);

    // Q(s, a) = -sum_i |a_i - a*_i| as relu units over the action inputs.
    nn::Mlp critic({obs_size + 2, 4, 1}, nn::HiddenActivation::relu, nn::OutputActivation::identity);
    for (int i = 0; i < 2; ++i) {
        critic.params()[0].weight(2 * i, obs_size + i) = 1.0;
        critic.params()[0].bias(2 * i) = -a_star(i);
        critic.params()[0].weight(2 * i + 1, obs_size + i) = -1.0;
        critic.params()[0].bias(2 * i + 1) = a_star(i);
    }
    critic.params()[1].weight.setConstant(-1.0);
    state.q_net = critic;

    Rng rng = make_rng(8);
    std::vector<replay::Episode> holder;
    replay::EpisodeBuilder builder(0, replay::make_features(Eigen::VectorXd::Random(obs_size)));
    for (int p = 0; p < 10; ++p) {
        Eigen::VectorXd obs(obs_size);
        for (auto& v : obs)
            v = uniform(rng, -1.0, 1.0);
        builder.add(Eigen::Vector2d::Zero(), 0.0, replay::make_features(obs), p == 9);
    }
    holder.push_back(std::move(builder).finish());
    algo::TransitionBatch probes;
    for (const auto& tr : holder[0].transitions)
        probes.push_back(&tr);

    auto distances = [&] {
        std::vector<double> d;
        for (const auto* tr : probes)
            d.push_back((algo::actor_action(*state.actor_net, space, *tr->obs) - a_star).norm());
        return d;
    };
    const auto before = distances();
    for (int step = 0; step < 100; ++step) {
        algo::ddpg_actor_step(state, probes);
        if (!(*state.q_net == critic))
            return {false, "critic parameters changed during an actor step"};
    }
    const auto after = distances();
    int reduced = 0;
    double mean_before = 0, mean_after = 0;
    for (std::size_t i = 0; i < before.size(); ++i) {
        reduced += after[i] < before[i];
        mean_before += before[i] / 10;
        mean_after += after[i] / 10;
    }
    return {reduced == 10, fmt("%g/10 probe states closer; mean distance %.3f -> %.3f", reduced, mean_before, mean_after)};
}

Outcome pcl_fixed_point()
{
    // Deterministic fixture: every (s, a) has a single successor, so realized returns equal values.
    tabular::TabularMdp mdp;
    mdp.n_states = 6;
    mdp.n_actions = 2;
    mdp.horizon = 8;
    Rng rng = make_rng(61);
    mdp.reward = Eigen::MatrixXd::Zero(6, 2);
    for (int s = 0; s < 6; ++s) {
        mdp.transition.emplace_back();
        for (int a = 0; a < 2; ++a) {
            Eigen::VectorXd p = Eigen::VectorXd::Zero(6);
            p(std::uniform_int_distribution<int>(0, 5)(rng)) = 1.0;
            mdp.transition.back().push_back(p);
            mdp.reward(s, a) = uniform(rng, 0.0, 1.0);
        }
    }
    mdp.validate();
    const double gamma = 0.95;
    const auto oracle = tabular::value_iteration(mdp, gamma);

    double worst = 0.0;
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto ep = tabular::rollout(mdp, tabular::greedy_policy(oracle), k);
        const auto T = ep.size();
        std::vector<double> values(T + 1, 0.0), rewards(T), ratios(T);
        for (std::size_t i = 0; i < T; ++i) {
            const auto [t, s] = mdp.decode(*ep.transitions[i].obs);
            values[i] = oracle.value(t, s);
            rewards[i] = ep.transitions[i].reward;
            ratios[i] = -1.0 - static_cast<double>(i);
        }
        for (double r : algo::path_consistency_residuals(values, rewards, ratios, gamma, 0.0, 0))
            worst = std::max(worst, std::abs(r));
        for (double r : algo::path_consistency_residuals(values, rewards, ratios, gamma, 0.0, static_cast<int>(T)))
            worst = std::max(worst, std::abs(r));
    }

    // Gaussian log-density against the product of univariate densities.
    double density_err = 0.0;
    for (int k = 0; k < 200; ++k) {
        const int dim = 1 + k % 4;
        Eigen::VectorXd x(dim), mean(dim), log_std(dim);
        double product = 1.0;
        for (int i = 0; i < dim; ++i) {
            mean(i) = uniform(rng, -1.0, 1.0);
            log_std(i) = uniform(rng, -2.0, 0.5);
            x(i) = mean(i) + uniform(rng, -2.0, 2.0) * std::exp(log_std(i));
            const double sd = std::exp(log_std(i));
            product *= std::exp(-0.5 * std::pow((x(i) - mean(i)) / sd, 2)) / (sd * std::sqrt(2.0 * std::numbers::pi));
        }
        density_err = std::max(density_err, std::abs(algo::gaussian_log_density(x, mean, log_std) - std::log(product)));
    }

    // And through the policy object, where the mean comes from the sigmoid network.
    const auto space = action::ActionSpace::box(Eigen::Vector2d(-1.0, 0.0), Eigen::Vector2d(1.0, 2.0));
    const auto policy = algo::GaussianPolicy::glorot(3, {8}, nn::HiddenActivation::tanh, space, rng);
    for (int k = 0; k < 50; ++k) {
        const Eigen::VectorXd obs = Eigen::VectorXd::Random(3);
        const Eigen::VectorXd mu = policy.mean(obs);
        const double at_mean = -(policy.log_std().array() + std::log(std::sqrt(2.0 * std::numbers::pi))).sum();
        density_err = std::max(density_err, std::abs(policy.log_prob(obs, mu) - at_mean));
    }

    return {worst < 1e-8 && density_err < 1e-10,
            fmt("max residual %.2e (tau=0, d=T); max log-density error %.2e", worst, density_err)};
}

Outcome learning_gate()
{
    const double threshold = 3.0 * env::random_policy_baseline;
    const std::size_t eval_n = 500;
    struct Case {
        algo::EstimatorKind kind;
        std::size_t pool;
    };
    const Case cases[] = {{algo::EstimatorKind::dql, harness::medium_pool},
                          {algo::EstimatorKind::mc, harness::large_pool},
                          {algo::EstimatorKind::corr_mc, harness::large_pool}};
    bool all = true;
    std::string detail;
    for (const auto& c : cases) {
        double mean = 0.0;
        std::string per_seed;
        for (std::uint64_t seed : {1, 2, 3}) {
            harness::RunConfig cfg;
            cfg.algo = c.kind;
            cfg.pool_episodes = c.pool;
            cfg.seed = seed;
            cfg.hyper.nu_anneal_steps = cfg.train_steps / 2;
            cfg.eval_every = cfg.train_steps;
            const auto result = harness::run_training(cfg);
            if (result.failed || !result.state)
                return {false, algo::to_string(c.kind) + " run failed: " + result.history.back().status};
            const double rate = harness::evaluate(algo::greedy_policy(*result.state), cfg.env, eval_n,
                                                  derive_seed(harness::RunSeeds::from(seed).eval, 99), env::Split::test);
            mean += rate / 3.0;
            per_seed += fmt("%.3f ", rate);
        }
        const bool ok = mean >= threshold;
        all = all && ok;
        detail += algo::to_string(c.kind) + fmt(" pool %g: %.3f", static_cast<double>(c.pool), mean) + " [" +
                  per_seed.substr(0, per_seed.size() - 1) + "]; ";
    }
    detail += fmt("threshold %.3f (3 x held-out random %.3f)", threshold, env::random_policy_baseline);
    return {all, detail};
}

Outcome protocol_fidelity()
{
    std::string detail;
    bool ok = true;

    {
        harness::RunConfig cfg;
        cfg.algo = algo::EstimatorKind::dql;
        cfg.regime = harness::Regime::on_policy;
        cfg.pool_episodes = harness::small_pool;
        cfg.train_steps = 3000;
        cfg.eval_every = 3000;
        cfg.eval_episodes = 10;
        const auto r = harness::run_training(cfg);
        std::size_t collected = 0;
        bool fifty = true;
        for (const auto& e : r.collections) {
            collected += e.episodes;
            fifty = fifty && e.episodes == 50;
        }
        const bool on_policy_ok = !r.failed && r.collections.size() == 3 && fifty &&
                                  r.final_pool_episodes == harness::small_pool + 150;
        ok = ok && on_policy_ok;
        detail += fmt("on-policy 3k steps: %g collections, %g episodes; ", static_cast<double>(r.collections.size()),
                      static_cast<double>(collected));
    }

    harness::RunConfig tiny;
    tiny.env.grid_size = 2;
    tiny.hyper = harness::default_hyperparameters(tiny.env);
    tiny.hyper.hidden = {4};
    tiny.hyper.batch_transitions = 4;
    tiny.hyper.batch_episodes = 1;
    tiny.hyper.cem = {1, 4, 2};
    tiny.pool_episodes = 5;
    tiny.train_steps = 2;
    tiny.eval_every = 2;
    tiny.eval_episodes = 2;

    const harness::SweepGrid grid;
    const auto dir = scratch("sweep");
    std::vector<harness::MetricRow> all_rows;
    for (auto kind : {algo::EstimatorKind::dql, algo::EstimatorKind::mc, algo::EstimatorKind::supervised}) {
        tiny.algo = kind;
        harness::SweepOptions opts;
        opts.metrics_path = dir / (algo::to_string(kind) + ".csv");
        const auto summary = harness::run_sweep(grid, tiny, opts);
        const auto rows = harness::read_metrics(opts.metrics_path);
        const auto expected = harness::grid_cardinality(grid, kind);
        const std::size_t product = grid.learning_rates.size() * grid.widths.size() *
                                    (algo::uses_gamma(kind) ? grid.gammas.size() : 1) *
                                    grid.explore_durations.size() * grid.seeds.size();
        ok = ok && rows.size() == expected && expected == product && summary.failed == 0;
        detail += algo::to_string(kind) + fmt(" sweep %g rows (grid %g); ", static_cast<double>(rows.size()),
                                               static_cast<double>(product));
        all_rows.insert(all_rows.end(), rows.begin(), rows.end());
    }

    const auto curves = harness::stability_report(all_rows);
    bool sorted = true;
    for (const auto& c : curves)
        sorted = sorted && std::is_sorted(c.success.rbegin(), c.success.rend());
    ok = ok && sorted;
    detail += sorted ? "stability curves non-increasing; " : "stability curves NOT sorted; ";

    // Nine seeds of a single configuration.
    tiny.algo = algo::EstimatorKind::dql;
    tiny.eval_episodes = 40;
    std::vector<harness::MetricRow> nine;
    for (std::uint64_t seed = 1; seed <= 9; ++seed) {
        tiny.seed = seed;
        nine.push_back(harness::train_and_report(tiny));
    }
    const auto cells = harness::barplot_report(nine);
    double mean = 0.0, ss = 0.0;
    for (const auto& r : nine)
        mean += r.eval_success / 9.0;
    for (const auto& r : nine)
        ss += (r.eval_success - mean) * (r.eval_success - mean);
    const double sd = std::sqrt(ss / 8.0);
    const bool bars_ok = cells.size() == 1 && cells[0].n == 9 && cells[0].stddev &&
                         std::abs(*cells[0].stddev - sd) < 1e-12 && std::abs(cells[0].mean - mean) < 1e-12;
    ok = ok && bars_ok;
    detail += fmt("bar cell n=%g std=%.4f (independent %.4f)", bars_ok ? 9.0 : static_cast<double>(cells[0].n),
                  cells[0].stddev.value_or(-1.0), sd);
    return {ok, detail};
}

template <typename Fn>
FormatErrorKind kind_of(Fn&& fn)
{
    try {
        fn();
    } catch (const FormatError& e) {
        return e.kind();
    }
    throw std::runtime_error("corrupted input was accepted");
}

Outcome persistence()
{
    const auto dir = scratch("persistence");
    bool ok = true;
    std::string detail;

    const env::EnvConfig env_cfg;
    replay::ReplayPool pool(std::nullopt, env_cfg.descriptor_hash());
    for (auto& e : env::collect_random_grasps(env_cfg, 200, 71))
        pool.add_episode(std::move(e));
    replay::save_pool(pool, dir / "a.ogrp");
    replay::save_pool(replay::load_pool(dir / "a.ogrp"), dir / "b.ogrp");
    const auto pool_bytes = read_file(dir / "a.ogrp");
    const bool pool_same = pool_bytes == read_file(dir / "b.ogrp");
    ok = ok && pool_same;
    detail += pool_same ? "pool round trip identical; " : "pool round trip differs; ";

    bool ckpt_same = true;
    for (auto kind : algo::all_estimator_kinds()) {
        const auto state =
            algo::make_algo_state(kind, harness::default_hyperparameters(env_cfg), env_cfg.feature_size(),
                                  env_cfg.action_space(), 5);
        const auto first = dir / ("ckpt_" + algo::to_string(kind));
        const auto second = dir / ("ckpt2_" + algo::to_string(kind));
        algo::save_checkpoints(state, first);
        auto reloaded = algo::make_algo_state(kind, harness::default_hyperparameters(env_cfg), env_cfg.feature_size(),
                                              env_cfg.action_space(), 6);
        algo::load_checkpoints(reloaded, first);
        algo::save_checkpoints(reloaded, second);
        for (const auto& entry : std::filesystem::directory_iterator(first))
            ckpt_same = ckpt_same && read_file(entry.path()) == read_file(second / entry.path().filename());
    }
    ok = ok && ckpt_same;
    detail += ckpt_same ? "checkpoints identical; " : "checkpoints differ; ";

    const auto ckpt_bytes = read_file(dir / "ckpt_dql" / "q_net.ogrl");
    struct Corruption {
        std::string name;
        std::function<std::string(std::string)> apply;
        FormatErrorKind expected;
    };
    const std::vector<Corruption> corruptions = {
        {"truncated", [](std::string b) { return b.substr(0, b.size() * 2 / 3); }, FormatErrorKind::checksum_mismatch},
        {"stub", [](std::string b) { return b.substr(0, 5); }, FormatErrorKind::truncated},
        {"bit flip", [](std::string b) { b[b.size() / 2] ^= 0x04; return b; }, FormatErrorKind::checksum_mismatch},
        {"version", [](std::string b) { b[4] = 7; return b; }, FormatErrorKind::version_mismatch},
        {"magic", [](std::string b) { b[0] = 'Z'; return b; }, FormatErrorKind::bad_magic},
    };
    int kinds_ok = 0, kinds_total = 0;
    for (const auto& c : corruptions) {
        write_file_atomic(dir / "bad.ogrp", c.apply(pool_bytes));
        write_file_atomic(dir / "bad.ogrl", c.apply(ckpt_bytes));
        kinds_ok += kind_of([&] { replay::load_pool(dir / "bad.ogrp"); }) == c.expected;
        kinds_ok += kind_of([&] { nn::load_checkpoint(dir / "bad.ogrl"); }) == c.expected;
        kinds_total += 2;
    }
    kinds_ok += kind_of([&] { replay::load_pool(dir / "missing.ogrp"); }) == FormatErrorKind::io;
    kinds_ok += kind_of([&] { nn::load_checkpoint(dir / "missing.ogrl"); }) == FormatErrorKind::io;
    kinds_total += 2;
    ok = ok && kinds_ok == kinds_total;
    detail += fmt("%g/%g corruptions raised the declared error kind", kinds_ok, kinds_total);
    return {ok, detail};
}

} // namespace

int main()
{
    report("gradient exactness", gradient_exactness);
    report("tabular DQL convergence", tabular_dql_convergence);
    report("corrected MC unbiasedness", corrected_mc_unbiased);
    report("nu=0 reduction", nu_zero_reduction);
    report("telescoping identity", telescoping_identity);
    bool count_ok = false;
    report("CEM quality (2-D)", [&] { return cem_quality(2, 100, &count_ok); });
    {
        bool count4 = false;
        const auto o = cem_quality(4, 100, &count4);
        info("CEM quality (4-D)", o.detail);
    }
    report("DDPG actor mechanics", ddpg_actor_mechanics);
    report("PCL fixed point", pcl_fixed_point);
    report("persistence", persistence);
    report("protocol fidelity", protocol_fidelity);
    report("desk-scale learning gate", learning_gate);
    std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
