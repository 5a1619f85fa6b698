#include "ogrl/algo/estimator.hpp"
#include "ogrl/algo/targets.hpp"
#include "ogrl/env/collect.hpp"
#include "ogrl/tabular/tabular_mdp.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>

using namespace ogrl;
using namespace ogrl::algo;
using replay::Episode;
using replay::EpisodeBuilder;
using replay::Pose;

namespace {

Episode reward_episode(const std::vector<double>& rewards, int obs_size = 2, int action_dim = 1)
{
    auto obs = [&](int t) { return replay::make_features(Eigen::VectorXd::Constant(obs_size, 0.1 * t)); };
    EpisodeBuilder b(0, obs(0));
    for (std::size_t i = 0; i < rewards.size(); ++i)
        b.add(Eigen::VectorXd::Constant(action_dim, 0.0), rewards[i], obs(static_cast<int>(i) + 1),
              i + 1 == rewards.size(), Pose{});
    return std::move(b).finish(Pose{});
}

env::EnvConfig small_env()
{
    env::EnvConfig cfg;
    cfg.grid_size = 2;
    return cfg;
}

const std::vector<Episode>& grasp_data()
{
    static const auto data = env::collect_random_grasps(small_env(), 40, 3);
    return data;
}

AlgoConfig small_config()
{
    AlgoConfig cfg;
    cfg.hidden = {6, 5};
    cfg.activation = nn::HiddenActivation::tanh;
    cfg.optimizer.kind = nn::OptimizerKind::sgd;
    cfg.optimizer.learning_rate = 1.0;
    cfg.batch_episodes = 3;
    cfg.batch_transitions = 12;
    cfg.cem = {2, 16, 4};
    cfg.pose_action_scale = Eigen::Vector4d(1.0 / 6.0, 1.0 / 6.0, 0.25, std::numbers::pi / 4);
    return cfg;
}

AlgoState small_state(EstimatorKind kind, std::uint64_t seed = 1)
{
    const auto env = small_env();
    return make_algo_state(kind, small_config(), env.feature_size(), env.action_space(), seed);
}

EpisodeBatch episode_batch()
{
    const auto& d = grasp_data();
    return {&d[0], &d[5], &d[11]};
}

TransitionBatch transition_batch()
{
    TransitionBatch out;
    for (const auto& e : grasp_data())
        for (const auto& tr : e.transitions)
            if (out.size() < 12)
                out.push_back(&tr);
    return out;
}

// One update of `kind`, with the same randomness every call.
double run_update(AlgoState& s)
{
    Rng rng = make_rng(77);
    switch (s.kind) {
    case EstimatorKind::supervised:
        return supervised_update(s, episode_batch());
    case EstimatorKind::dql:
        return dql_update(s, transition_batch(), rng);
    case EstimatorKind::mc:
        return mc_update(s, episode_batch());
    case EstimatorKind::corr_mc:
        return corr_mc_update(s, episode_batch(), rng);
    case EstimatorKind::pcl:
        return pcl_update(s, episode_batch());
    case EstimatorKind::ddpg:
        return ddpg_critic_step(s, transition_batch());
    }
    return 0.0;
}

void set_lr(AlgoState& s, double lr) { s.set_learning_rate(lr); }

// The trainable parameter sets of a state, addressed uniformly.
std::vector<nn::Parameters*> trainables(AlgoState& s)
{
    if (s.kind == EstimatorKind::pcl)
        return {&s.value_net->params(), &s.policy->mean_net().params(), &s.policy->log_std_params()};
    return {&s.q_net->params()};
}

// With SGD at learning rate 1, one update moves parameters by exactly -gradient.
void check_update_gradient(EstimatorKind kind)
{
    auto base = small_state(kind);
    base.nu = 0.7;
    auto stepped = base;
    run_update(stepped);
    auto loss_at = [&](AlgoState s) {
        set_lr(s, 0.0);
        return run_update(s);
    };
    auto base_sets = trainables(base);
    auto stepped_sets = trainables(stepped);
    Rng pick = make_rng(5);
    const double h = 1e-6;
    int probes = 0;
    for (std::size_t set = 0; set < base_sets.size(); ++set) {
        for (std::size_t l = 0; l < base_sets[set]->size(); ++l) {
            for (int k = 0; k < 3; ++k) {
                auto& layer = (*base_sets[set])[l];
                const bool weight = layer.weight.size() > 0 && k < 2;
                Eigen::Index n = weight ? layer.weight.size() : layer.bias.size();
                const auto idx = std::uniform_int_distribution<Eigen::Index>(0, n - 1)(pick);
                double* p = weight ? layer.weight.data() + idx : layer.bias.data() + idx;
                const double* q = weight ? (*stepped_sets[set])[l].weight.data() + idx
                                         : (*stepped_sets[set])[l].bias.data() + idx;
                const double analytic = *p - *q;
                const double saved = *p;
                *p = saved + h;
                const double plus = loss_at(base);
                *p = saved - h;
                const double minus = loss_at(base);
                *p = saved;
                const double numeric = (plus - minus) / (2 * h);
                CHECK(analytic == doctest::Approx(numeric).epsilon(1e-4).scale(1e-4));
                ++probes;
            }
        }
    }
    CHECK(probes > 0);
}

} // namespace

TEST_CASE("mc targets for a sparse three step episode")
{
    const auto ep = reward_episode({0.0, 0.0, 1.0});
    const auto t = mc_targets({&ep}, 0.9);
    REQUIRE(t[0].size() == 3);
    CHECK(t[0][0] == doctest::Approx(0.81));
    CHECK(t[0][1] == doctest::Approx(0.9));
    CHECK(t[0][2] == doctest::Approx(1.0));

    const auto zeros = reward_episode({0.0, 0.0, 0.0, 0.0});
    const auto zero_targets = mc_targets({&zeros}, 0.9);
    for (double v : zero_targets[0])
        CHECK(v == 0.0);
    const auto undiscounted = mc_targets({&ep}, 1.0);
    for (double v : undiscounted[0])
        CHECK(v == 1.0);
}

TEST_CASE("mc targets reject incomplete episodes")
{
    auto ep = reward_episode({0.0, 1.0});
    ep.transitions.back().done = false;
    CHECK_THROWS(mc_targets({&ep}, 0.9));
}

TEST_CASE("corrected targets with nu zero equal mc targets")
{
    const auto ep = reward_episode({0.0, 0.2, 0.0, 1.0});
    const AdvantageFn adv = [](const Episode& e) { return Eigen::VectorXd::Constant(e.size(), -0.4); };
    CHECK(corr_mc_targets({&ep}, 0.9, 0.0, adv) == mc_targets({&ep}, 0.9));
}

TEST_CASE("zero advantage leaves corrected targets equal to mc for any nu")
{
    const auto ep = reward_episode({0.0, 0.2, 0.0, 1.0});
    const AdvantageFn adv = [](const Episode& e) { return Eigen::VectorXd::Zero(e.size()); };
    for (double nu : {0.3, 1.0})
        CHECK(corr_mc_targets({&ep}, 0.9, nu, adv) == mc_targets({&ep}, 0.9));
}

TEST_CASE("corrected targets subtract discounted later advantages")
{
    const auto ep = reward_episode({0.0, 0.0, 1.0});
    const AdvantageFn adv = [](const Episode&) { return Eigen::Vector3d(-0.5, -0.2, -0.1); };
    const auto t = corr_mc_targets({&ep}, 0.9, 1.0, adv)[0];
    CHECK(t[2] == doctest::Approx(1.0));
    CHECK(t[1] == doctest::Approx(0.9 * (1.0 + 0.1)));
    CHECK(t[0] == doctest::Approx(0.9 * 0.2 + 0.81 * (1.0 + 0.1)));
}

TEST_CASE("nu schedule ramps linearly")
{
    CHECK(nu_schedule(0, 1000) == 0.0);
    CHECK(nu_schedule(500, 1000) == doctest::Approx(0.5));
    CHECK(nu_schedule(1000, 1000) == 1.0);
    CHECK(nu_schedule(5000, 1000) == 1.0);
    CHECK_THROWS(nu_schedule(1, 0));
}

TEST_CASE("dql targets: terminal transitions and myopic discount")
{
    Rng rng = make_rng(1);
    const auto space = action::ActionSpace::unit_box(1);
    nn::Mlp q({3, 4, 1}, nn::HiddenActivation::relu, nn::OutputActivation::identity);
    q.params()[1].bias(0) = 3.0;
    const auto terminal = reward_episode({1.0});
    const auto longer = reward_episode({0.0, 0.5, 1.0});
    const TransitionBatch batch{&terminal.transitions[0], &longer.transitions[1]};
    const auto y = dql_targets(batch, q, q, space, 0.9, 16, rng);
    CHECK(y(0) == 1.0);
    CHECK(y(1) == doctest::Approx(0.5 + 0.9 * 3.0));
    const auto y0 = dql_targets(batch, q, q, space, 0.0, 16, rng);
    CHECK(y0(0) == 1.0);
    CHECK(y0(1) == 0.5);
}

TEST_CASE("dql targets on a tabular MDP follow the Bellman backup")
{
    const auto mdp = tabular::default_verification_mdp();
    const double gamma = 0.9;
    const auto oracle = tabular::value_iteration(mdp, gamma);
    const auto space = action::ActionSpace::discrete(mdp.n_actions);

    // A linear net over [one-hot(t, s) ; one-hot(a)] cannot represent Q*, but a hidden
    // layer with one unit per (t, s, a) cell can.
    const int n_obs = mdp.observation_size();
    const int cells = n_obs * mdp.n_actions;
    nn::Mlp q({n_obs + mdp.n_actions, cells, 1}, nn::HiddenActivation::relu, nn::OutputActivation::identity);
    auto& hidden = q.params()[0];
    auto& out = q.params()[1];
    for (int o = 0; o < n_obs; ++o)
        for (int a = 0; a < mdp.n_actions; ++a) {
            const int c = o * mdp.n_actions + a;
            hidden.weight(c, o) = 1.0;
            hidden.weight(c, n_obs + a) = 1.0;
            hidden.bias(c) = -1.0;
            out.weight(0, c) = oracle.q[static_cast<std::size_t>(o / mdp.n_states)](o % mdp.n_states, a);
        }

    Rng rng = make_rng(3);
    std::vector<Episode> episodes;
    for (int i = 0; i < 3000; ++i)
        episodes.push_back(tabular::rollout(mdp, tabular::uniform_policy(mdp), 100 + static_cast<std::uint64_t>(i)));
    TransitionBatch batch;
    for (const auto& e : episodes)
        if (e.transitions[0].action(0) == 1.0)
            batch.push_back(&e.transitions[0]);
    const auto y = dql_targets(batch, q, q, space, gamma, 16, rng);
    const double mean = y.mean();
    const double sd = std::sqrt((y.array() - mean).square().mean());
    const double expected = oracle.q[0](mdp.start_state, 1);
    CHECK(std::abs(mean - expected) < 3 * sd / std::sqrt(static_cast<double>(y.size())) + 1e-12);
}

TEST_CASE("supervised targets point at the final pose")
{
    const Eigen::Vector4d scale(0.1, 0.1, 0.25, 1.0);
    EpisodeBuilder b(0, replay::make_features(Eigen::VectorXd::Zero(2)));
    const Pose p0{0.50, 0.50, 1.00, 0.0}, p1{0.55, 0.48, 0.75, 0.2}, p2{0.58, 0.47, 0.50, 0.3};
    const Pose final_pose{0.60, 0.45, 0.25, 0.4};
    b.add(Eigen::Vector4d::Zero(), 0.0, replay::make_features(Eigen::VectorXd::Zero(2)), false, p0);
    b.add(Eigen::Vector4d::Zero(), 0.0, replay::make_features(Eigen::VectorXd::Zero(2)), false, p1);
    b.add(Eigen::Vector4d::Zero(), 1.0, replay::make_features(Eigen::VectorXd::Zero(2)), true, p2);
    const auto ep = std::move(b).finish(final_pose);

    const auto s = supervised_targets({&ep}, scale);
    REQUIRE(s.size() == 3);
    const Pose poses[] = {p0, p1, p2};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& p = poses[i];
        const Eigen::Vector4d expected((final_pose.x - p.x) / 0.1, (final_pose.y - p.y) / 0.1,
                                       (final_pose.z - p.z) / 0.25, final_pose.phi - p.phi);
        CHECK(s[i].action.isApprox(expected.cwiseMax(-1.0).cwiseMin(1.0)));
        CHECK(s[i].label == 1.0);
    }

    auto failed = ep;
    failed.outcome = 0.0;
    failed.transitions.back().reward = 0.0;
    for (const auto& smp : supervised_targets({&failed}, scale))
        CHECK(smp.label == 0.0);

    const auto endpoint = pose_displacement_action(final_pose, final_pose, scale);
    CHECK(endpoint.isZero());

    auto missing = ep;
    missing.transitions[1].gripper_pose.reset();
    CHECK_THROWS(supervised_targets({&missing}, scale));
}

TEST_CASE("pose displacement wraps the angle")
{
    const Eigen::Vector4d scale(1.0, 1.0, 1.0, 1.0);
    const auto a = pose_displacement_action(Pose{0, 0, 0, 3.0}, Pose{0, 0, 0, -3.0}, scale);
    CHECK(a(3) == doctest::Approx(2 * std::numbers::pi - 6.0));
}

TEST_CASE("path consistency residuals")
{
    const std::vector<double> rewards{0.0, 0.5, 1.0};
    const double gamma = 0.9;
    // Exact returns as values, zero after the end.
    std::vector<double> values(4, 0.0);
    for (int t = 2; t >= 0; --t)
        values[static_cast<std::size_t>(t)] = rewards[static_cast<std::size_t>(t)] + gamma * values[static_cast<std::size_t>(t) + 1];
    const std::vector<double> ratios{-1.0, -2.0, -0.5};
    for (int d : {0, 1, 2, 3})
        for (double r : path_consistency_residuals(values, rewards, ratios, gamma, 0.0, d))
            CHECK(std::abs(r) < 1e-12);

    const auto r = path_consistency_residuals({0.0, 0.0, 0.0, 0.0}, rewards, ratios, gamma, 0.1, 1);
    CHECK(r[1] == doctest::Approx(-(0.5 + 0.1 * 2.0)));
    CHECK_THROWS(path_consistency_residuals(values, rewards, ratios, gamma, 0.0, -1));
    CHECK_THROWS(path_consistency_residuals({0.0}, rewards, ratios, gamma, 0.0, 1));
}

TEST_CASE("gaussian log density at the mean")
{
    const Eigen::Vector2d mean(0.2, -0.3);
    const Eigen::Vector2d log_std(std::log(0.5), std::log(2.0));
    const double expected = -(std::log(0.5 * std::sqrt(2 * std::numbers::pi)) + std::log(2.0 * std::sqrt(2 * std::numbers::pi)));
    CHECK(gaussian_log_density(mean, mean, log_std) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("gaussian policy initial std and floor")
{
    Rng rng = make_rng(2);
    const auto space = action::ActionSpace::box(Eigen::Vector2d(-1.0, 0.0), Eigen::Vector2d(1.0, 4.0));
    auto policy = GaussianPolicy::glorot(3, {4}, nn::HiddenActivation::relu, space, rng);
    CHECK(policy.log_std()(0) == doctest::Approx(std::log(0.3 * 2.0)));
    CHECK(policy.log_std()(1) == doctest::Approx(std::log(0.3 * 4.0)));
    policy.set_log_std(Eigen::Vector2d(-20.0, 0.0));
    policy.apply_floor();
    CHECK(policy.log_std()(0) == doctest::Approx(std::log(GaussianPolicy::min_std)));
    for (int i = 0; i < 50; ++i)
        CHECK(space.contains(policy.sample(Eigen::Vector3d::Random(), rng)));
}

TEST_CASE("loss gradients match finite differences with targets held constant")
{
    for (auto kind : {EstimatorKind::supervised, EstimatorKind::dql, EstimatorKind::mc, EstimatorKind::corr_mc,
                      EstimatorKind::ddpg, EstimatorKind::pcl}) {
        CAPTURE(to_string(kind));
        check_update_gradient(kind);
    }
}

TEST_CASE("dql update equals regression onto precomputed targets")
{
    auto s = small_state(EstimatorKind::dql);
    for (auto& layer : s.q_target->shadow_mut().params())
        layer.bias.array() += 0.3;
    auto via_update = s;
    run_update(via_update);

    Rng rng = make_rng(77);
    const auto batch = transition_batch();
    const auto y = dql_targets(batch, *s.q_net, s.q_target->shadow(), s.space, s.config.gamma, s.config.argmax_samples, rng);
    Eigen::MatrixXd obs(s.obs_size, static_cast<Eigen::Index>(batch.size())), act(4, static_cast<Eigen::Index>(batch.size()));
    for (std::size_t j = 0; j < batch.size(); ++j) {
        obs.col(static_cast<Eigen::Index>(j)) = *batch[j]->obs;
        act.col(static_cast<Eigen::Index>(j)) = batch[j]->action;
    }
    const auto step = regression_gradients(*s.q_net, q_inputs(obs, act, s.space), y);
    nn::add_scaled(s.q_net->params(), step.grads.params, -1.0);
    for (std::size_t l = 0; l < s.q_net->params().size(); ++l)
        CHECK(s.q_net->params()[l].weight.isApprox(via_update.q_net->params()[l].weight, 1e-12));
}

TEST_CASE("ddpg actor step leaves the critic untouched")
{
    auto s = small_state(EstimatorKind::ddpg);
    s.set_learning_rate(0.01);
    const auto critic = *s.q_net;
    const auto actor = *s.actor_net;
    ddpg_actor_step(s, transition_batch());
    CHECK(*s.q_net == critic);
    CHECK_FALSE(*s.actor_net == actor);
}

TEST_CASE("ddpg critic on terminal transitions regresses onto the reward")
{
    auto s = small_state(EstimatorKind::ddpg);
    const auto ep = grasp_data()[0];
    const TransitionBatch batch{&ep.transitions.back()};
    auto a = s;
    auto b = s;
    for (auto& layer : b.actor_target->shadow_mut().params())
        layer.weight.setRandom();
    CHECK(ddpg_critic_step(a, batch) == ddpg_critic_step(b, batch));
    CHECK(*a.q_net == *b.q_net);
}

TEST_CASE("ddpg and pcl need continuous actions")
{
    CHECK_THROWS_AS(make_algo_state(EstimatorKind::ddpg, AlgoConfig{}, 4, action::ActionSpace::discrete(3), 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_algo_state(EstimatorKind::pcl, AlgoConfig{}, 4, action::ActionSpace::discrete(3), 1),
                    std::invalid_argument);
}

TEST_CASE("zero learning rate leaves every kind unchanged")
{
    replay::ReplayPool pool;
    for (const auto& e : grasp_data())
        pool.add_episode(e);
    for (auto kind : all_estimator_kinds()) {
        CAPTURE(to_string(kind));
        auto s = small_state(kind);
        s.set_learning_rate(0.0);
        const auto before = s;
        Rng rng = make_rng(9);
        const double loss = train_step(s, pool, rng);
        CHECK(std::isfinite(loss));
        CHECK(loss >= 0.0);
        if (s.q_net)
            CHECK(*s.q_net == *before.q_net);
        if (s.actor_net)
            CHECK(*s.actor_net == *before.actor_net);
        if (s.policy)
            CHECK(*s.policy == *before.policy);
        if (s.value_net)
            CHECK(*s.value_net == *before.value_net);
        CHECK(s.global_step == 1);
    }
}

TEST_CASE("training losses stay finite and non-negative")
{
    replay::ReplayPool pool;
    for (const auto& e : grasp_data())
        pool.add_episode(e);
    for (auto kind : all_estimator_kinds()) {
        CAPTURE(to_string(kind));
        auto s = small_state(kind);
        s.set_learning_rate(1e-3);
        Rng rng = make_rng(10);
        for (int i = 0; i < 60; ++i) {
            const double loss = train_step(s, pool, rng);
            CHECK(std::isfinite(loss));
            CHECK(loss >= 0.0);
        }
    }
}

TEST_CASE("lagged copies and nu advance with global steps")
{
    replay::ReplayPool pool;
    for (const auto& e : grasp_data())
        pool.add_episode(e);
    auto cfg = small_config();
    cfg.optimizer = {};
    cfg.target_lag = 5;
    cfg.nu_anneal_steps = 10;
    const auto env = small_env();
    auto s = make_algo_state(EstimatorKind::corr_mc, cfg, env.feature_size(), env.action_space(), 1);
    const auto initial_target = s.q_target->shadow();
    Rng rng = make_rng(2);
    for (int i = 0; i < 4; ++i)
        train_step(s, pool, rng);
    CHECK(s.q_target->shadow() == initial_target);
    CHECK(s.nu == doctest::Approx(0.4));
    train_step(s, pool, rng);
    CHECK(s.q_target->shadow() == *s.q_net);
    for (int i = 0; i < 10; ++i)
        train_step(s, pool, rng);
    CHECK(s.nu == 1.0);
}

TEST_CASE("greedy policies: ddpg uses the actor, value kinds use cem")
{
    auto ddpg = small_state(EstimatorKind::ddpg);
    Rng rng = make_rng(1);
    const auto obs = *grasp_data()[0].transitions[0].obs;
    CHECK(greedy_policy(ddpg)(obs, rng) == actor_action(*ddpg.actor_net, ddpg.space, obs));

    auto pcl = small_state(EstimatorKind::pcl);
    CHECK(greedy_policy(pcl)(obs, rng) == pcl.policy->mean(obs));

    auto mc = small_state(EstimatorKind::mc);
    const auto a = greedy_policy(mc)(obs, rng);
    CHECK(mc.space.contains(a));
}

TEST_CASE("checkpoints restore every network")
{
    const auto dir = std::filesystem::temp_directory_path() / "ogrl_test_ckpt";
    std::filesystem::remove_all(dir);
    for (auto kind : all_estimator_kinds()) {
        CAPTURE(to_string(kind));
        const auto saved = small_state(kind, 3);
        save_checkpoints(saved, dir / to_string(kind));
        auto loaded = small_state(kind, 99);
        load_checkpoints(loaded, dir / to_string(kind));
        if (saved.q_net)
            CHECK(*loaded.q_net == *saved.q_net);
        if (saved.actor_net)
            CHECK(*loaded.actor_net == *saved.actor_net);
        if (saved.policy)
            CHECK(*loaded.policy == *saved.policy);
        if (saved.value_net)
            CHECK(*loaded.value_net == *saved.value_net);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("algo config round-trips through key-value text")
{
    auto cfg = small_config();
    cfg.gamma = 0.95;
    cfg.tau = 0.05;
    cfg.pcl_d = 4;
    const auto back = AlgoConfig::from_kv(KvConfig::parse(cfg.to_kv().to_string()));
    CHECK(back.gamma == 0.95);
    CHECK(back.hidden == cfg.hidden);
    CHECK(back.tau == 0.05);
    CHECK(back.pcl_d == 4);
    CHECK(back.cem.population == 16);
    CHECK(back.pose_action_scale == cfg.pose_action_scale);
    CHECK(parse_estimator_kind("corr_mc") == EstimatorKind::corr_mc);
    CHECK_THROWS(parse_estimator_kind("sarsa"));
}
