#include "mg/dqn.hpp"

#include <algorithm>
#include <stdexcept>

#include "mg/kernels.hpp"

namespace mg {

void AgentConfig::validate() const {
    if (minibatch < 1)
        throw std::invalid_argument("agent: minibatch must be at least 1");
    if (replay_capacity < minibatch)
        throw std::invalid_argument("agent: replay capacity below minibatch size");
    if (warmup < 0)
        throw std::invalid_argument("agent: warmup must be non-negative");
    if (total_steps < 1)
        throw std::invalid_argument("agent: total_steps must be positive");
    if (target_sync < 1)
        throw std::invalid_argument("agent: target_sync must be positive");
    if (!(learning_rate > 0.0))
        throw std::invalid_argument("agent: learning rate must be positive");
    if (!(discount >= 0.0 && discount < 1.0))
        throw std::invalid_argument("agent: discount must be in [0, 1)");
    if (!(epsilon.start >= 0.0 && epsilon.start <= 1.0 &&
          epsilon.end >= 0.0 && epsilon.end <= 1.0))
        throw std::invalid_argument("agent: epsilon bounds must be in [0, 1]");
    if (!(epsilon.decay_fraction > 0.0 && epsilon.decay_fraction <= 1.0))
        throw std::invalid_argument("agent: epsilon decay fraction must be in (0, 1]");
    net.validate();
}

double epsilon_at(long step, const AgentConfig& cfg) {
    double decay_steps = cfg.epsilon.decay_fraction * static_cast<double>(cfg.total_steps);
    if (decay_steps <= 0.0) return cfg.epsilon.end;
    double t = std::min(1.0, static_cast<double>(step) / decay_steps);
    return cfg.epsilon.start + (cfg.epsilon.end - cfg.epsilon.start) * t;
}

int select_action(std::span<const double> q_values, double epsilon, Rng& rng) {
    if (rng.uniform() < epsilon)
        return rng.uniform_int(static_cast<int>(q_values.size()));
    return static_cast<int>(kern::max_index(q_values.data(), q_values.size()));
}

ReplayMemory::ReplayMemory(int capacity) : capacity_(capacity) {
    if (capacity < 1)
        throw std::invalid_argument("replay: capacity must be positive");
    entries_.reserve(capacity);
}

void ReplayMemory::push(const ReplayEntry& entry) {
    if (entries_.size() < static_cast<std::size_t>(capacity_)) {
        entries_.push_back(entry);
    } else {
        entries_[next_] = entry;
        next_ = (next_ + 1) % entries_.size();
    }
}

std::vector<double> td_targets(std::span<const ReplayEntry> batch,
                               const NetParams& target, double gamma,
                               TargetRule rule, const NetParams& online) {
    std::vector<double> y(batch.size());
    static thread_local Workspace ws_target, ws_online;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const ReplayEntry& e = batch[i];
        if (e.done) {
            y[i] = e.reward;
            continue;
        }
        std::span<const double> qt = forward(target, e.next_state, ws_target);
        if (rule == TargetRule::Vanilla) {
            y[i] = e.reward + gamma * qt[kern::max_index(qt.data(), qt.size())];
        } else {
            std::span<const double> qo = forward(online, e.next_state, ws_online);
            y[i] = e.reward + gamma * qt[kern::max_index(qo.data(), qo.size())];
        }
    }
    return y;
}

std::optional<double> learn_step(const ReplayMemory& memory, NetParams& online,
                                 const NetParams& target, const AgentConfig& cfg,
                                 Rng& rng) {
    std::size_t threshold = static_cast<std::size_t>(
        std::max(cfg.minibatch, cfg.warmup));
    if (memory.size() < threshold) return std::nullopt;

    std::vector<ReplayEntry> batch(cfg.minibatch);
    for (int i = 0; i < cfg.minibatch; ++i)
        batch[i] = memory[rng.uniform_int(static_cast<int>(memory.size()))];

    std::vector<double> y = td_targets(batch, target, cfg.discount,
                                       cfg.target_rule, online);

    std::vector<GradSample> samples(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i)
        samples[i] = GradSample{batch[i].state.data(), batch[i].action, y[i]};

    static thread_local Workspace ws;
    static thread_local Grads grads;
    double loss = grad(online, samples, grads, ws);
    sgd_update(online, grads, cfg.learning_rate);
    return loss;
}

void sync_target(const NetParams& online, NetParams& target, long step,
                 int interval) {
    if (step % interval == 0) target = online;
}

TrainResult train(const EnvConfig& env_cfg, const AgentConfig& agent_cfg) {
    agent_cfg.validate();
    Env env(env_cfg);

    NetConfig net_cfg = agent_cfg.net;
    net_cfg.output = env_cfg.grid.size();
    net_cfg.learning_rate = agent_cfg.learning_rate;
    if (net_cfg.input != 3)
        throw std::invalid_argument("agent: environment observations have 3 features");

    NetParams online = NetParams::init(net_cfg, mix_seed(agent_cfg.seed, 0x11));
    NetParams target = online;
    ReplayMemory memory(agent_cfg.replay_capacity);
    Rng rng(mix_seed(agent_cfg.seed, 0x22));

    const double scale = env.demand_scale();
    const long T = agent_cfg.total_steps;

    TrainStats stats;
    stats.reward.reserve(T);
    stats.epsilon.reserve(T);
    stats.action.reserve(T);
    stats.provider_cost.reserve(T);
    stats.consumer_cost_total.reserve(T);
    stats.prosumer_cost_total.reserve(T);
    stats.operation_cost.reserve(T);

    Workspace ws;
    std::array<double, 3> features = env.reset().features(scale);

    int episode = 0;
    double ep_reward = 0.0, ep_loss = 0.0;
    int ep_steps = 0, ep_learns = 0;

    for (long t = 0; t < T; ++t) {
        double eps = epsilon_at(t, agent_cfg);
        std::span<const double> q = forward(online, features, ws);
        int action = select_action(q, eps, rng);

        auto [tr, sr] = env.step(action);
        std::array<double, 3> next_features = tr.next_state.features(scale);

        memory.push(ReplayEntry{features, next_features, action, tr.reward,
                                tr.done});

        stats.reward.push_back(tr.reward);
        stats.epsilon.push_back(eps);
        stats.action.push_back(action);
        stats.provider_cost.push_back(sr.provider_cost);
        double phi_c = 0.0, phi_p = 0.0;
        for (double v : sr.consumer_costs) phi_c += v;
        for (double v : sr.prosumer_costs) phi_p += v;
        stats.consumer_cost_total.push_back(phi_c);
        stats.prosumer_cost_total.push_back(phi_p);
        stats.operation_cost.push_back(sr.operation_cost);

        ep_reward += tr.reward;
        ++ep_steps;

        if (auto loss = learn_step(memory, online, target, agent_cfg, rng)) {
            stats.losses.emplace_back(t, *loss);
            ep_loss += *loss;
            ++ep_learns;
        }
        sync_target(online, target, t, agent_cfg.target_sync);

        if (tr.done) {
            EpisodeStats ep;
            ep.episode = episode++;
            ep.steps = ep_steps;
            ep.total_reward = ep_reward;
            ep.mean_reward = ep_reward / ep_steps;
            ep.learn_steps = ep_learns;
            ep.mean_loss = ep_learns > 0 ? ep_loss / ep_learns : 0.0;
            stats.episodes.push_back(ep);
            ep_reward = ep_loss = 0.0;
            ep_steps = ep_learns = 0;
            features = env.reset().features(scale);
        } else {
            features = next_features;
        }
    }

    if (ep_steps > 0) {
        EpisodeStats ep;
        ep.episode = episode;
        ep.steps = ep_steps;
        ep.total_reward = ep_reward;
        ep.mean_reward = ep_reward / ep_steps;
        ep.learn_steps = ep_learns;
        ep.mean_loss = ep_learns > 0 ? ep_loss / ep_learns : 0.0;
        stats.episodes.push_back(ep);
    }

    return TrainResult{std::move(online), std::move(stats)};
}

} // namespace mg
