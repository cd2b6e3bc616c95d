#pragma once
// Deep Q-learning on the microgrid environment: epsilon-greedy sampling
// into a ring-buffer replay memory, uniformly sampled minibatches, TD
// targets from a periodically synchronized target network, and one SGD
// step per learn phase. Fully deterministic given the seeds.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mg/env.hpp"
#include "mg/qnet.hpp"
#include "mg/rng.hpp"

namespace mg {

enum class TargetRule { Vanilla, Double };

struct EpsilonSchedule {
    double start = 1.0;
    double end = 0.05;
    double decay_fraction = 0.5; // fraction of total steps spent decaying
};

struct AgentConfig {
    int minibatch = 32;          // K
    int warmup = 1000;           // stored transitions before learning starts
    int replay_capacity = 10000; // N
    long total_steps = 100000;   // T
    int target_sync = 1000;      // U
    double learning_rate = 0.001;
    double discount = 0.99;      // gamma
    EpsilonSchedule epsilon;
    TargetRule target_rule = TargetRule::Vanilla;
    std::uint64_t seed = 1;
    NetConfig net;

    void validate() const; // throws std::invalid_argument
};

// Linear decay from start to end over the first decay_fraction * T steps,
// then flat. Steps are zero-based.
double epsilon_at(long step, const AgentConfig& cfg);

// Uniform over all actions with probability epsilon, otherwise greedy
// with ties broken toward the lowest index.
int select_action(std::span<const double> q_values, double epsilon, Rng& rng);

struct ReplayEntry {
    std::array<double, 3> state{};
    std::array<double, 3> next_state{};
    int action = 0;
    double reward = 0.0;
    bool done = false;
};

class ReplayMemory {
public:
    explicit ReplayMemory(int capacity);

    void push(const ReplayEntry& entry);
    std::size_t size() const { return entries_.size(); }
    int capacity() const { return capacity_; }
    const ReplayEntry& operator[](std::size_t i) const { return entries_[i]; }

private:
    int capacity_;
    std::size_t next_ = 0; // overwrite cursor once full
    std::vector<ReplayEntry> entries_;
};

// TD regression targets: y = r for terminal transitions, otherwise
// r + gamma * max_a Q_target(s', a) (vanilla) or
// r + gamma * Q_target(s', argmax_a Q_online(s', a)) (double).
std::vector<double> td_targets(std::span<const ReplayEntry> batch,
                               const NetParams& target, double gamma,
                               TargetRule rule, const NetParams& online);

// One learn phase: sample K transitions with replacement, regress toward
// the TD targets, apply one SGD step. Returns the minibatch loss, or
// nullopt (and leaves everything untouched) while the memory holds fewer
// than max(K, warmup) transitions.
std::optional<double> learn_step(const ReplayMemory& memory, NetParams& online,
                                 const NetParams& target, const AgentConfig& cfg,
                                 Rng& rng);

// Copies online into target when step % interval == 0.
void sync_target(const NetParams& online, NetParams& target, long step,
                 int interval);

struct EpisodeStats {
    int episode = 0;
    int steps = 0;
    double total_reward = 0.0;
    double mean_reward = 0.0;
    double mean_loss = 0.0; // over learn phases inside the episode; 0 if none
    int learn_steps = 0;
};

struct TrainStats {
    std::vector<double> reward;
    std::vector<double> epsilon;
    std::vector<int> action;
    std::vector<std::pair<long, double>> losses; // (step, loss) per learn phase
    // Per-step market aggregates for reports and consistency checks.
    std::vector<double> provider_cost;
    std::vector<double> consumer_cost_total;
    std::vector<double> prosumer_cost_total;
    std::vector<double> operation_cost;
    std::vector<EpisodeStats> episodes;
};

struct TrainResult {
    NetParams params;
    TrainStats stats;
};

// Runs total_steps environment steps across consecutive episodes,
// interleaving sample and learn phases.
TrainResult train(const EnvConfig& env_cfg, const AgentConfig& agent_cfg);

} // namespace mg
