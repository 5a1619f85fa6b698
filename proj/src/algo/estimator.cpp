#include "ogrl/algo/estimator.hpp"

#include "ogrl/core/errors.hpp"
#include "ogrl/nn/checkpoint.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace ogrl::algo {

namespace {

constexpr std::array<std::pair<EstimatorKind, const char*>, 6> kind_names{{
    {EstimatorKind::supervised, "supervised"},
    {EstimatorKind::dql, "dql"},
    {EstimatorKind::mc, "mc"},
    {EstimatorKind::corr_mc, "corr_mc"},
    {EstimatorKind::ddpg, "ddpg"},
    {EstimatorKind::pcl, "pcl"},
}};

std::string join_doubles(const Eigen::VectorXd& v)
{
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i)
            out += ' ';
        out += format_double(v(i));
    }
    return out;
}

} // namespace

std::string to_string(EstimatorKind kind)
{
    for (const auto& [k, name] : kind_names)
        if (k == kind)
            return name;
    throw std::invalid_argument("unknown estimator kind");
}

EstimatorKind parse_estimator_kind(std::string_view name)
{
    for (const auto& [k, n] : kind_names)
        if (name == n)
            return k;
    throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                                "' (expected supervised, dql, mc, corr_mc, ddpg or pcl)");
}

const std::vector<EstimatorKind>& all_estimator_kinds()
{
    static const std::vector<EstimatorKind> kinds{EstimatorKind::supervised, EstimatorKind::dql,  EstimatorKind::mc,
                                                  EstimatorKind::corr_mc,    EstimatorKind::ddpg, EstimatorKind::pcl};
    return kinds;
}

bool uses_gamma(EstimatorKind kind)
{
    return kind != EstimatorKind::supervised && kind != EstimatorKind::mc;
}

bool samples_episodes(EstimatorKind kind)
{
    return kind != EstimatorKind::dql && kind != EstimatorKind::ddpg;
}

void AlgoConfig::validate() const
{
    if (!(gamma > 0.0 && gamma <= 1.0) && gamma != 0.0)
        throw std::invalid_argument("gamma must lie in [0, 1]");
    for (int h : hidden)
        if (h <= 0)
            throw std::invalid_argument("hidden layer widths must be positive");
    if (!(optimizer.learning_rate >= 0.0))
        throw std::invalid_argument("learning rate must be non-negative");
    if (batch_transitions < 1 || batch_episodes < 1)
        throw std::invalid_argument("batch sizes must be positive");
    if (target_lag < 1)
        throw std::invalid_argument("target lag must be positive");
    if (argmax_samples < 1)
        throw std::invalid_argument("argmax sample count must be positive");
    cem.validate();
    if (nu_anneal_steps < 1)
        throw std::invalid_argument("nu anneal steps must be positive");
    if (!(tau >= 0.0))
        throw std::invalid_argument("tau must be non-negative");
    if (pcl_d < 0)
        throw std::invalid_argument("pcl window d must be >= 0");
    if (!(initial_std_fraction > 0.0))
        throw std::invalid_argument("initial std fraction must be positive");
    if (!(pose_action_scale.array() > 0.0).all())
        throw std::invalid_argument("pose action scale must be positive");
}

KvConfig AlgoConfig::to_kv() const
{
    KvConfig kv;
    kv.set("gamma", gamma);
    std::string widths;
    for (std::size_t i = 0; i < hidden.size(); ++i)
        widths += (i ? " " : "") + std::to_string(hidden[i]);
    kv.set("hidden", widths);
    kv.set("activation", nn::to_string(activation));
    kv.set("optimizer", optimizer.kind == nn::OptimizerKind::adam ? "adam" : "sgd");
    kv.set("learning_rate", optimizer.learning_rate);
    kv.set("batch_transitions", batch_transitions);
    kv.set("batch_episodes", batch_episodes);
    kv.set("target_lag", target_lag);
    kv.set("argmax_samples", argmax_samples);
    kv.set("cem_iterations", cem.iterations);
    kv.set("cem_population", cem.population);
    kv.set("cem_elites", cem.elite_count);
    kv.set("nu_anneal_steps", nu_anneal_steps);
    kv.set("tau", tau);
    kv.set("pcl_d", pcl_d);
    kv.set("trust_region", trust_region);
    kv.set("initial_std_fraction", initial_std_fraction);
    kv.set("pose_action_scale", join_doubles(pose_action_scale));
    return kv;
}

AlgoConfig AlgoConfig::from_kv(const KvConfig& kv)
{
    AlgoConfig c;
    c.gamma = kv.get_double("gamma", c.gamma);
    if (kv.contains("hidden")) {
        c.hidden.clear();
        for (double w : kv.get_doubles("hidden", {})) {
            if (w != std::floor(w))
                throw std::invalid_argument("hidden widths must be integers");
            c.hidden.push_back(static_cast<int>(w));
        }
    }
    const auto act = kv.get_string("activation", nn::to_string(c.activation));
    if (act == "relu")
        c.activation = nn::HiddenActivation::relu;
    else if (act == "tanh")
        c.activation = nn::HiddenActivation::tanh;
    else
        throw std::invalid_argument("activation must be relu or tanh, got '" + act + "'");
    const auto opt = kv.get_string("optimizer", "adam");
    if (opt == "adam")
        c.optimizer.kind = nn::OptimizerKind::adam;
    else if (opt == "sgd")
        c.optimizer.kind = nn::OptimizerKind::sgd;
    else
        throw std::invalid_argument("optimizer must be adam or sgd, got '" + opt + "'");
    c.optimizer.learning_rate = kv.get_double("learning_rate", c.optimizer.learning_rate);
    c.batch_transitions = static_cast<int>(kv.get_int("batch_transitions", c.batch_transitions));
    c.batch_episodes = static_cast<int>(kv.get_int("batch_episodes", c.batch_episodes));
    c.target_lag = static_cast<int>(kv.get_int("target_lag", c.target_lag));
    c.argmax_samples = static_cast<int>(kv.get_int("argmax_samples", c.argmax_samples));
    c.cem.iterations = static_cast<int>(kv.get_int("cem_iterations", c.cem.iterations));
    c.cem.population = static_cast<int>(kv.get_int("cem_population", c.cem.population));
    c.cem.elite_count = static_cast<int>(kv.get_int("cem_elites", c.cem.elite_count));
    c.nu_anneal_steps = kv.get_int("nu_anneal_steps", c.nu_anneal_steps);
    c.tau = kv.get_double("tau", c.tau);
    c.pcl_d = static_cast<int>(kv.get_int("pcl_d", c.pcl_d));
    c.trust_region = kv.get_bool("trust_region", c.trust_region);
    c.initial_std_fraction = kv.get_double("initial_std_fraction", c.initial_std_fraction);
    if (kv.contains("pose_action_scale")) {
        const auto s = kv.get_doubles("pose_action_scale", {});
        if (s.size() != 4)
            throw std::invalid_argument("pose_action_scale needs 4 values");
        c.pose_action_scale = Eigen::Vector4d(s[0], s[1], s[2], s[3]);
    }
    c.validate();
    return c;
}

void AlgoState::set_learning_rate(double lr)
{
    for (auto* opt : {&q_opt, &actor_opt, &value_opt, &log_std_opt})
        if (*opt)
            (*opt)->set_learning_rate(lr);
    config.optimizer.learning_rate = lr;
}

namespace {

std::vector<int> layer_sizes(int in, const std::vector<int>& hidden, int out)
{
    std::vector<int> sizes{in};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(out);
    return sizes;
}

void require_continuous(EstimatorKind kind, const action::ActionSpace& space)
{
    if (space.is_discrete())
        throw std::invalid_argument(to_string(kind) + " requires a continuous action space");
}

void finish_step(AlgoState& s)
{
    ++s.global_step;
    if (s.q_target)
        s.q_target->maybe_sync(*s.q_net);
    if (s.actor_target)
        s.actor_target->maybe_sync(*s.actor_net);
    if (s.policy_prior)
        s.policy_prior->maybe_sync(*s.policy);
    s.nu = nu_schedule(s.global_step, s.config.nu_anneal_steps);
}

struct EpisodeColumns {
    Eigen::MatrixXd obs;
    Eigen::MatrixXd actions;
};

EpisodeColumns episode_columns(const EpisodeBatch& episodes, int obs_size, int action_dim)
{
    std::size_t n = 0;
    for (const auto* e : episodes)
        n += e->size();
    EpisodeColumns c{Eigen::MatrixXd(obs_size, static_cast<Eigen::Index>(n)),
                     Eigen::MatrixXd(action_dim, static_cast<Eigen::Index>(n))};
    Eigen::Index j = 0;
    for (const auto* e : episodes)
        for (const auto& tr : e->transitions) {
            if (tr.obs->size() != obs_size)
                throw DimensionMismatch("observation", static_cast<std::size_t>(obs_size),
                                        static_cast<std::size_t>(tr.obs->size()));
            c.obs.col(j) = *tr.obs;
            c.actions.col(j) = tr.action;
            ++j;
        }
    return c;
}

double regress_q(AlgoState& s, const Eigen::MatrixXd& obs, const Eigen::MatrixXd& actions, const Eigen::VectorXd& y)
{
    auto step = regression_gradients(*s.q_net, q_inputs(obs, actions, s.space), y);
    s.q_opt->step(s.q_net->params(), step.grads.params);
    return step.loss;
}

Eigen::VectorXd flatten(const TargetTable& table)
{
    std::size_t n = 0;
    for (const auto& row : table)
        n += row.size();
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    Eigen::Index j = 0;
    for (const auto& row : table)
        for (double v : row)
            y(j++) = v;
    return y;
}

void require_kind(const AlgoState& s, std::initializer_list<EstimatorKind> kinds, const char* op)
{
    for (auto k : kinds)
        if (s.kind == k)
            return;
    throw std::logic_error(std::string(op) + " is not available for " + to_string(s.kind));
}

} // namespace

AlgoState make_algo_state(EstimatorKind kind, const AlgoConfig& config, int obs_size, const action::ActionSpace& space,
                          std::uint64_t seed)
{
    config.validate();
    if (obs_size <= 0)
        throw std::invalid_argument("observation size must be positive");
    if (kind == EstimatorKind::ddpg || kind == EstimatorKind::pcl)
        require_continuous(kind, space);
    if (kind == EstimatorKind::supervised && (space.is_discrete() || space.dim() != 4))
        throw std::invalid_argument("supervised targets need the 4-axis gripper action space");

    AlgoState s;
    s.kind = kind;
    s.config = config;
    s.space = space;
    s.obs_size = obs_size;
    auto rng = make_rng(seed);

    if (kind != EstimatorKind::pcl) {
        s.q_net = nn::Mlp::glorot(layer_sizes(obs_size + space.encoded_size(), config.hidden, 1), config.activation,
                                  nn::OutputActivation::identity, rng);
        s.q_opt.emplace(config.optimizer, s.q_net->params());
    }
    if (kind == EstimatorKind::dql || kind == EstimatorKind::corr_mc || kind == EstimatorKind::ddpg)
        s.q_target.emplace(*s.q_net, config.target_lag);
    if (kind == EstimatorKind::ddpg) {
        s.actor_net = nn::Mlp::glorot(layer_sizes(obs_size, config.hidden, space.dim()), config.activation,
                                      nn::OutputActivation::sigmoid, rng);
        s.actor_target.emplace(*s.actor_net, config.target_lag);
        s.actor_opt.emplace(config.optimizer, s.actor_net->params());
    }
    if (kind == EstimatorKind::pcl) {
        s.policy = GaussianPolicy::glorot(obs_size, config.hidden, config.activation, space, rng,
                                          config.initial_std_fraction);
        s.value_net = nn::Mlp::glorot(layer_sizes(obs_size, config.hidden, 1), config.activation,
                                      nn::OutputActivation::identity, rng);
        s.actor_opt.emplace(config.optimizer, s.policy->mean_net().params());
        s.log_std_opt.emplace(config.optimizer, s.policy->log_std_params());
        s.value_opt.emplace(config.optimizer, s.value_net->params());
        if (config.trust_region)
            s.policy_prior.emplace(*s.policy, config.target_lag);
    }
    s.nu = nu_schedule(0, config.nu_anneal_steps);
    return s;
}

double supervised_update(AlgoState& s, const EpisodeBatch& episodes)
{
    require_kind(s, {EstimatorKind::supervised}, "supervised_update");
    const auto samples = supervised_targets(episodes, s.config.pose_action_scale);
    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd obs(s.obs_size, n), actions(s.space.dim(), n);
    Eigen::VectorXd y(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& smp = samples[static_cast<std::size_t>(j)];
        obs.col(j) = *smp.obs;
        actions.col(j) = smp.action;
        y(j) = smp.label;
    }
    const double loss = regress_q(s, obs, actions, y);
    finish_step(s);
    return loss;
}

double dql_update(AlgoState& s, const TransitionBatch& batch, Rng& rng)
{
    require_kind(s, {EstimatorKind::dql}, "dql_update");
    const auto n = static_cast<Eigen::Index>(batch.size());
    const Eigen::VectorXd y =
        dql_targets(batch, *s.q_net, s.q_target->shadow(), s.space, s.config.gamma, s.config.argmax_samples, rng);
    Eigen::MatrixXd obs(s.obs_size, n), actions(s.space.dim(), n);
    for (Eigen::Index j = 0; j < n; ++j) {
        obs.col(j) = *batch[static_cast<std::size_t>(j)]->obs;
        actions.col(j) = batch[static_cast<std::size_t>(j)]->action;
    }
    const double loss = regress_q(s, obs, actions, y);
    finish_step(s);
    return loss;
}

double mc_update(AlgoState& s, const EpisodeBatch& episodes)
{
    require_kind(s, {EstimatorKind::mc}, "mc_update");
    const auto cols = episode_columns(episodes, s.obs_size, s.space.dim());
    const double loss = regress_q(s, cols.obs, cols.actions, flatten(mc_targets(episodes, s.config.gamma)));
    finish_step(s);
    return loss;
}

double corr_mc_update(AlgoState& s, const EpisodeBatch& episodes, Rng& rng)
{
    require_kind(s, {EstimatorKind::corr_mc}, "corr_mc_update");
    const auto cols = episode_columns(episodes, s.obs_size, s.space.dim());
    const auto adv = network_advantage(s.q_target->shadow(), s.space, s.config.argmax_samples, rng);
    const auto y = flatten(corr_mc_targets(episodes, s.config.gamma, s.nu, adv));
    const double loss = regress_q(s, cols.obs, cols.actions, y);
    finish_step(s);
    return loss;
}

Eigen::VectorXd actor_action(const nn::Mlp& actor, const action::ActionSpace& space, const Eigen::VectorXd& obs)
{
    return space.low() + space.range().cwiseProduct(actor.forward(obs));
}

Eigen::MatrixXd actor_actions(const nn::Mlp& actor, const action::ActionSpace& space, const Eigen::MatrixXd& obs)
{
    Eigen::MatrixXd y = actor.forward_batch(obs);
    return (y.array().colwise() * space.range().array()).colwise() + space.low().array();
}

double ddpg_critic_step(AlgoState& s, const TransitionBatch& batch)
{
    require_kind(s, {EstimatorKind::ddpg}, "ddpg_critic_step");
    const auto n = static_cast<Eigen::Index>(batch.size());
    Eigen::MatrixXd obs(s.obs_size, n), actions(s.space.dim(), n), next_obs(s.obs_size, n);
    Eigen::VectorXd y(n);
    Eigen::Index m = 0;
    std::vector<Eigen::Index> boot;
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& tr = *batch[static_cast<std::size_t>(j)];
        obs.col(j) = *tr.obs;
        actions.col(j) = tr.action;
        y(j) = tr.reward;
        if (!tr.done && s.config.gamma != 0.0) {
            next_obs.col(m++) = *tr.next_obs;
            boot.push_back(j);
        }
    }
    if (m > 0) {
        const Eigen::MatrixXd next = next_obs.leftCols(m);
        const Eigen::VectorXd v =
            q_values(s.q_target->shadow(), next, actor_actions(s.actor_target->shadow(), s.space, next), s.space);
        for (Eigen::Index c = 0; c < m; ++c)
            y(boot[static_cast<std::size_t>(c)]) += s.config.gamma * v(c);
    }
    return regress_q(s, obs, actions, y);
}

double ddpg_actor_step(AlgoState& s, const TransitionBatch& batch)
{
    require_kind(s, {EstimatorKind::ddpg}, "ddpg_actor_step");
    const auto n = static_cast<Eigen::Index>(batch.size());
    Eigen::MatrixXd obs(s.obs_size, n);
    for (Eigen::Index j = 0; j < n; ++j)
        obs.col(j) = *batch[static_cast<std::size_t>(j)]->obs;
    const Eigen::MatrixXd inputs = q_inputs(obs, actor_actions(*s.actor_net, s.space, obs), s.space);
    const double objective = s.q_net->forward_batch(inputs).mean();
    // Minimize -mean Q(s, mu(s)).
    const auto critic = s.q_net->backward_batch(inputs, Eigen::RowVectorXd::Constant(n, -1.0 / static_cast<double>(n)));
    Eigen::MatrixXd upstream = critic.inputs.bottomRows(s.space.dim());
    upstream = upstream.array().colwise() * s.space.range().array();
    const auto actor = s.actor_net->backward_batch(obs, upstream);
    s.actor_opt->step(s.actor_net->params(), actor.params);
    s.last_actor_objective = objective;
    return objective;
}

DdpgLosses ddpg_update(AlgoState& s, const TransitionBatch& batch)
{
    DdpgLosses out;
    out.critic_loss = ddpg_critic_step(s, batch);
    out.actor_objective = ddpg_actor_step(s, batch);
    finish_step(s);
    return out;
}

double pcl_update(AlgoState& s, const EpisodeBatch& episodes)
{
    require_kind(s, {EstimatorKind::pcl}, "pcl_update");
    const auto cols = episode_columns(episodes, s.obs_size, s.space.dim());
    const Eigen::VectorXd v_all = s.value_net->forward_batch(cols.obs).row(0).transpose();
    const Eigen::VectorXd logp = s.policy->log_prob_batch(cols.obs, cols.actions);
    Eigen::VectorXd prior = Eigen::VectorXd::Zero(logp.size());
    if (s.policy_prior)
        prior = s.policy_prior->shadow().log_prob_batch(cols.obs, cols.actions);

    const double gamma = s.config.gamma;
    const double tau = s.config.tau;
    Eigen::VectorXd g_value = Eigen::VectorXd::Zero(v_all.size());
    Eigen::VectorXd g_logp = Eigen::VectorXd::Zero(v_all.size());
    std::vector<double> all_residuals;
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t offset = 0;
    for (const auto* e : episodes) {
        const auto T = e->size();
        std::vector<double> values(T + 1, 0.0), rewards(T), ratios(T);
        for (std::size_t i = 0; i < T; ++i) {
            const auto j = static_cast<Eigen::Index>(offset + i);
            values[i] = v_all(j);
            rewards[i] = e->transitions[i].reward;
            ratios[i] = logp(j) - prior(j);
        }
        if (!e->transitions.back().done)
            throw std::invalid_argument("pcl_update needs complete episodes");
        const auto r = path_consistency_residuals(values, rewards, ratios, gamma, tau, s.config.pcl_d);
        all_residuals.insert(all_residuals.end(), r.begin(), r.end());
        spans.emplace_back(offset, T);
        offset += T;
    }
    const auto n_windows = static_cast<double>(all_residuals.size());
    double loss = 0.0;
    std::size_t w = 0;
    for (const auto& [start, T] : spans) {
        for (std::size_t t = 0; t < T; ++t, ++w) {
            const double r = all_residuals[w];
            loss += 0.5 * r * r / n_windows;
            const double c = r / n_windows;
            const std::size_t len =
                s.config.pcl_d == 0 ? T - t : std::min<std::size_t>(static_cast<std::size_t>(s.config.pcl_d), T - t);
            g_value(static_cast<Eigen::Index>(start + t)) += c;
            double disc = 1.0;
            for (std::size_t i = t; i < t + len; ++i) {
                g_logp(static_cast<Eigen::Index>(start + i)) += c * tau * disc;
                disc *= gamma;
            }
            if (t + len < T)
                g_value(static_cast<Eigen::Index>(start + t + len)) -= c * disc;
        }
    }
    const auto vgrad = s.value_net->backward_batch(cols.obs, g_value.transpose());
    const auto pgrad = s.policy->log_prob_gradients(cols.obs, cols.actions, g_logp);
    s.value_opt->step(s.value_net->params(), vgrad.params);
    s.actor_opt->step(s.policy->mean_net().params(), pgrad.mean);
    s.log_std_opt->step(s.policy->log_std_params(), pgrad.log_std);
    s.policy->apply_floor();
    finish_step(s);
    return loss;
}

namespace {

void check_transition_shape(const AlgoState& s, const replay::Transition& tr)
{
    if (tr.obs->size() != s.obs_size)
        throw DimensionMismatch("observation", static_cast<std::size_t>(s.obs_size), static_cast<std::size_t>(tr.obs->size()));
    if (tr.action.size() != s.space.dim())
        throw DimensionMismatch("action", static_cast<std::size_t>(s.space.dim()), static_cast<std::size_t>(tr.action.size()));
}

} // namespace

double train_step(AlgoState& s, const replay::ReplayPool& pool, Rng& rng)
{
    if (samples_episodes(s.kind)) {
        const auto eps = pool.sample_episodes(static_cast<std::size_t>(s.config.batch_episodes), rng);
        for (const auto* e : eps)
            for (const auto& tr : e->transitions)
                check_transition_shape(s, tr);
        switch (s.kind) {
        case EstimatorKind::supervised:
            return supervised_update(s, eps);
        case EstimatorKind::mc:
            return mc_update(s, eps);
        case EstimatorKind::corr_mc:
            return corr_mc_update(s, eps, rng);
        case EstimatorKind::pcl:
            return pcl_update(s, eps);
        default:
            break;
        }
    }
    const auto batch = pool.sample_transitions(static_cast<std::size_t>(s.config.batch_transitions), rng);
    for (const auto* tr : batch)
        check_transition_shape(s, *tr);
    if (s.kind == EstimatorKind::dql)
        return dql_update(s, batch, rng);
    return ddpg_update(s, batch).critic_loss;
}

PolicyFn greedy_policy(const AlgoState& s)
{
    const auto space = std::make_shared<const action::ActionSpace>(s.space);
    switch (s.kind) {
    case EstimatorKind::ddpg: {
        auto actor = std::make_shared<const nn::Mlp>(*s.actor_net);
        return [actor, space](const Eigen::VectorXd& obs, Rng&) { return actor_action(*actor, *space, obs); };
    }
    case EstimatorKind::pcl: {
        auto policy = std::make_shared<const GaussianPolicy>(*s.policy);
        return [policy](const Eigen::VectorXd& obs, Rng&) { return policy->mean(obs); };
    }
    default: {
        auto q = std::make_shared<const nn::Mlp>(*s.q_net);
        const auto cem = s.config.cem;
        return [q, space, cem](const Eigen::VectorXd& obs, Rng& rng) {
            const auto qf = q_function(*q, *space);
            if (space->is_discrete())
                return action::exhaustive_argmax(qf, obs, *space).action;
            return action::cem_argmax(qf, obs, *space, cem, rng).action;
        };
    }
    }
}

PolicyFn behavior_policy(const AlgoState& s, const action::ExplorationSchedule& schedule)
{
    if (s.kind == EstimatorKind::pcl) {
        auto policy = std::make_shared<const GaussianPolicy>(*s.policy);
        return [policy](const Eigen::VectorXd& obs, Rng& rng) { return policy->sample(obs, rng); };
    }
    auto greedy = greedy_policy(s);
    const auto step = s.global_step;
    return [greedy, step, schedule, space = s.space](const Eigen::VectorXd& obs, Rng& rng) {
        const Eigen::VectorXd a = greedy(obs, rng);
        return action::explore(a, step, schedule, space, rng);
    };
}

namespace {

std::filesystem::path role_path(const std::filesystem::path& dir, const std::string& role)
{
    return dir / (role + ".ogrl");
}

void replace_net(nn::Mlp& dst, const std::filesystem::path& dir, const std::string& role)
{
    auto ck = nn::load_checkpoint(role_path(dir, role));
    if (ck.role != role)
        throw FormatError(FormatErrorKind::malformed, "checkpoint " + role_path(dir, role).string() +
                                                          " holds role '" + ck.role + "'");
    if (ck.net.layer_sizes() != dst.layer_sizes())
        throw FormatError(FormatErrorKind::malformed, "checkpoint " + role_path(dir, role).string() +
                                                          " has a different architecture");
    dst = std::move(ck.net);
}

nn::Mlp log_std_as_net(const GaussianPolicy& p)
{
    nn::Mlp net({1, static_cast<int>(p.log_std().size())}, nn::HiddenActivation::relu,
                nn::OutputActivation::identity);
    net.params().front().bias = p.log_std();
    return net;
}

} // namespace

void save_checkpoints(const AlgoState& s, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    if (s.q_net)
        nn::save_checkpoint(role_path(dir, "q_net"), *s.q_net, "q_net");
    if (s.q_target)
        nn::save_checkpoint(role_path(dir, "q_target"), s.q_target->shadow(), "q_target");
    if (s.actor_net)
        nn::save_checkpoint(role_path(dir, "actor_net"), *s.actor_net, "actor_net");
    if (s.actor_target)
        nn::save_checkpoint(role_path(dir, "actor_target"), s.actor_target->shadow(), "actor_target");
    if (s.policy) {
        nn::save_checkpoint(role_path(dir, "policy_mean"), s.policy->mean_net(), "policy_mean");
        nn::save_checkpoint(role_path(dir, "policy_log_std"), log_std_as_net(*s.policy), "policy_log_std");
    }
    if (s.value_net)
        nn::save_checkpoint(role_path(dir, "value_net"), *s.value_net, "value_net");
}

void load_checkpoints(AlgoState& s, const std::filesystem::path& dir)
{
    if (s.q_net)
        replace_net(*s.q_net, dir, "q_net");
    if (s.q_target)
        replace_net(s.q_target->shadow_mut(), dir, "q_target");
    if (s.actor_net)
        replace_net(*s.actor_net, dir, "actor_net");
    if (s.actor_target)
        replace_net(s.actor_target->shadow_mut(), dir, "actor_target");
    if (s.policy) {
        replace_net(s.policy->mean_net(), dir, "policy_mean");
        nn::Mlp ls = log_std_as_net(*s.policy);
        replace_net(ls, dir, "policy_log_std");
        s.policy->set_log_std(ls.params().front().bias);
    }
    if (s.value_net)
        replace_net(*s.value_net, dir, "value_net");
}

} // namespace ogrl::algo
