#pragma once
// The microgrid MDP. One step is one hour: the agent posts retail and
// purchase coefficients, customers route energy between the community
// battery and the provider, the battery advances, and the weighted
// operation cost becomes the (negated) reward.

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "mg/battery.hpp"
#include "mg/customer.hpp"
#include "mg/market.hpp"

namespace mg {

struct ActionGrid {
    std::vector<double> retail{0.2, 0.4, 0.6, 0.8, 1.0};
    std::vector<double> purchase{0.2, 0.4, 0.6, 0.8, 1.0};

    int size() const {
        return static_cast<int>(retail.size() * purchase.size());
    }
    // Row-major flattening: retail index = i / |purchase|,
    // purchase index = i % |purchase|.
    PriceAction decode(int index) const;
};

struct EnvObservation {
    double soc = 0.5;
    double sp_demand_kwh = 0.0; // previous step's realized provider demand
    int hour = 0;

    // Network input: {soc, demand / scale clipped to [0,1], hour / 23}.
    std::array<double, 3> features(double demand_scale) const;
};

struct Transition {
    EnvObservation state;
    int action = 0;
    double reward = 0.0;
    bool done = false;
    EnvObservation next_state;
};

// Everything measured during one step; tests and reports read from here.
struct StepResult {
    int step = 0;
    int hour = 0;
    PriceAction action;
    std::vector<StepAllocation> allocations;  // per customer, by id
    std::vector<double> consumer_costs;       // per consumer
    std::vector<double> prosumer_costs;       // per prosumer
    double provider_cost = 0.0;
    double operation_cost = 0.0;
    double reward = 0.0;
    double sp_demand_kwh = 0.0;
    double sp_surplus_kwh = 0.0;
    double battery_charge_kwh = 0.0;
    double battery_discharge_kwh = 0.0;
    double soc_after = 0.0;
    Cashflows cashflows;
};

struct EnvConfig {
    std::vector<CustomerProfile> customers;
    BatteryConfig battery;
    ProviderConfig provider;
    WeightConfig weights;
    ActionGrid grid;
    int episode_length = 8760;
    double demand_scale = 0.0; // <= 0 derives a scale from the profiles

    void validate() const; // throws std::invalid_argument
};

class Env {
public:
    explicit Env(EnvConfig cfg);

    // Rewinds to step 0 with the configured initial SOC. The seed is
    // accepted for interface stability; the environment itself is
    // deterministic (all randomness lives in profile construction).
    EnvObservation reset(std::uint64_t seed = 0);

    // Simulates one hour under the decoded action. Throws std::logic_error
    // when called on a finished episode.
    std::pair<Transition, StepResult> step(int action_index);

    bool done() const { return step_count_ >= cfg_.episode_length; }
    int step_count() const { return step_count_; }
    EnvObservation observation() const { return obs_; }
    double demand_scale() const { return demand_scale_; }
    const EnvConfig& config() const { return cfg_; }

private:
    EnvConfig cfg_;
    double demand_scale_ = 1.0;
    BatteryState battery_;
    EnvObservation obs_;
    int step_count_ = 0;
};

} // namespace mg
