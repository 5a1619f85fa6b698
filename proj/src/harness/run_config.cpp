#include "ogrl/harness/run_config.hpp"

#include <cstdio>
#include <stdexcept>

namespace ogrl::harness {

std::string to_string(Regime regime)
{
    return regime == Regime::off_policy ? "off_policy" : "on_policy";
}

Regime parse_regime(std::string_view text)
{
    if (text == "off_policy")
        return Regime::off_policy;
    if (text == "on_policy")
        return Regime::on_policy;
    throw std::invalid_argument("regime must be off_policy or on_policy, got '" + std::string(text) + "'");
}

algo::AlgoConfig default_hyperparameters(const env::EnvConfig& env)
{
    algo::AlgoConfig c;
    const auto& g = env.geometry;
    c.pose_action_scale = Eigen::Vector4d(g.dxy_scale(), g.dxy_scale(), g.dz_scale, g.dphi_scale);
    return c;
}

void RunConfig::validate() const
{
    env.validate();
    hyper.validate();
    if (pool_episodes < 1)
        throw std::invalid_argument("pool_episodes must be at least 1");
    if (train_steps < 0)
        throw std::invalid_argument("train_steps must be non-negative");
    if (regime == Regime::on_policy && (collect_every < 1 || collect_count < 1))
        throw std::invalid_argument("on-policy collection needs collect_every >= 1 and collect_count >= 1");
    if (eval_every < 1 || eval_episodes < 1)
        throw std::invalid_argument("evaluation needs eval_every >= 1 and eval_episodes >= 1");
    if (exploration.duration_steps < 0 || exploration.initial_scale < 0.0)
        throw std::invalid_argument("exploration settings must be non-negative");
}

KvConfig RunConfig::to_kv() const
{
    KvConfig kv;
    kv.set("algo", algo::to_string(algo));
    kv.set("pool_episodes", static_cast<std::uint64_t>(pool_episodes));
    kv.set("regime", to_string(regime));
    kv.set("train_steps", train_steps);
    kv.set("collect_every", collect_every);
    kv.set("collect_count", static_cast<std::uint64_t>(collect_count));
    kv.set("eval_every", eval_every);
    kv.set("eval_episodes", static_cast<std::uint64_t>(eval_episodes));
    kv.set("explore_duration", exploration.duration_steps);
    kv.set("explore_scale", exploration.initial_scale);
    kv.set("seed", seed);
    kv.merge(hyper.to_kv());
    const KvConfig env_kv = env.to_kv();
    for (const auto& [k, v] : env_kv.entries())
        kv.set("env." + k, v);
    return kv;
}

RunConfig RunConfig::from_kv(const KvConfig& kv)
{
    RunConfig c;
    c.algo = algo::parse_estimator_kind(kv.get_string("algo", algo::to_string(c.algo)));
    c.pool_episodes = kv.get_uint("pool_episodes", c.pool_episodes);
    c.regime = parse_regime(kv.get_string("regime", to_string(c.regime)));
    c.train_steps = kv.get_int("train_steps", c.train_steps);
    c.collect_every = kv.get_int("collect_every", c.collect_every);
    c.collect_count = kv.get_uint("collect_count", c.collect_count);
    c.eval_every = kv.get_int("eval_every", c.eval_every);
    c.eval_episodes = kv.get_uint("eval_episodes", c.eval_episodes);
    c.exploration.duration_steps = kv.get_int("explore_duration", c.exploration.duration_steps);
    c.exploration.initial_scale = kv.get_double("explore_scale", c.exploration.initial_scale);
    c.seed = kv.get_uint("seed", c.seed);

    KvConfig env_kv;
    for (const auto& [k, v] : kv.entries())
        if (k.rfind("env.", 0) == 0)
            env_kv.set(k.substr(4), v);
    c.env = env::EnvConfig::from_kv(env_kv);

    KvConfig hyper_kv = kv;
    if (!kv.contains("nu_anneal_steps"))
        hyper_kv.set("nu_anneal_steps", std::max<std::int64_t>(1, c.train_steps / 2));
    if (!kv.contains("pose_action_scale")) {
        const auto s = default_hyperparameters(c.env).pose_action_scale;
        hyper_kv.set("pose_action_scale", format_double(s(0)) + " " + format_double(s(1)) + " " +
                                              format_double(s(2)) + " " + format_double(s(3)));
    }
    c.hyper = algo::AlgoConfig::from_kv(hyper_kv);
    c.validate();
    return c;
}

std::uint64_t RunConfig::config_hash() const
{
    RunConfig copy = *this;
    copy.seed = 0;
    return env::fnv1a64(copy.to_kv().to_string());
}

std::string RunConfig::run_id() const
{
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(config_hash()));
    return algo::to_string(algo) + "-" + hex + "-s" + std::to_string(seed);
}

} // namespace ogrl::harness
