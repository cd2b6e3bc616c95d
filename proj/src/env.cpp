#include "mg/env.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mg {

PriceAction ActionGrid::decode(int index) const {
    if (index < 0 || index >= size())
        throw std::logic_error("action index " + std::to_string(index) +
                               " outside grid of " + std::to_string(size()));
    int np = static_cast<int>(purchase.size());
    return PriceAction{retail[index / np], purchase[index % np]};
}

std::array<double, 3> EnvObservation::features(double demand_scale) const {
    double d = demand_scale > 0.0 ? sp_demand_kwh / demand_scale : 0.0;
    return {soc, std::clamp(d, 0.0, 1.0), static_cast<double>(hour) / 23.0};
}

void EnvConfig::validate() const {
    if (customers.empty())
        throw std::invalid_argument("env: at least one customer required");
    battery.validate();
    weights.validate();
    if (grid.retail.empty() || grid.purchase.empty())
        throw std::invalid_argument("env: action grid must be non-empty");
    if (episode_length < 1)
        throw std::invalid_argument("env: episode_length must be positive");
    for (const CustomerProfile& c : customers) {
        if (c.demand_kwh.size() != c.generation_kwh.size())
            throw std::invalid_argument("env: customer " + std::to_string(c.id) +
                                        " has mismatched profile lengths");
        if (static_cast<int>(c.demand_kwh.size()) < episode_length)
            throw std::invalid_argument(
                "env: episode_length " + std::to_string(episode_length) +
                " exceeds profile length " + std::to_string(c.demand_kwh.size()));
        if (c.kind == CustomerKind::Consumer)
            for (double g : c.generation_kwh)
                if (g != 0.0)
                    throw std::invalid_argument("env: consumer " + std::to_string(c.id) +
                                                " has nonzero generation");
    }
}

namespace {

double derive_demand_scale(const EnvConfig& cfg) {
    // 10x the mean per-customer demand times the customer count; keeps the
    // encoded demand feature comfortably inside [0, 1].
    double total = 0.0;
    std::size_t samples = 0;
    for (const CustomerProfile& c : cfg.customers) {
        for (double d : c.demand_kwh) total += d;
        samples += c.demand_kwh.size();
    }
    double mean = samples > 0 ? total / static_cast<double>(samples) : 0.0;
    double scale = 10.0 * mean * static_cast<double>(cfg.customers.size());
    return scale > 0.0 ? scale : 1.0;
}

} // namespace

Env::Env(EnvConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    demand_scale_ = cfg_.demand_scale > 0.0 ? cfg_.demand_scale : derive_demand_scale(cfg_);
    reset();
}

EnvObservation Env::reset(std::uint64_t /*seed*/) {
    battery_.soc = cfg_.battery.soc_init;
    step_count_ = 0;
    obs_ = EnvObservation{battery_.soc, 0.0, 0};
    return obs_;
}

std::pair<Transition, StepResult> Env::step(int action_index) {
    if (done())
        throw std::logic_error("env: step() called on a finished episode");

    const PriceAction action = cfg_.grid.decode(action_index);
    const int t = step_count_;
    const int hour = t % 24;
    const std::size_t n = cfg_.customers.size();

    StepResult res;
    res.step = t;
    res.hour = hour;
    res.action = action;
    res.allocations.resize(n);

    // Charging first, then discharging, both against start-of-step
    // headrooms and in ascending customer id. SOC safety holds regardless
    // of order because each headroom is computed against the same SOC.
    double charge_left = charge_headroom(cfg_.battery, battery_);
    for (std::size_t i = 0; i < n; ++i) {
        const CustomerProfile& c = cfg_.customers[i];
        double surplus = std::max(c.generation_kwh[t] - c.demand_kwh[t], 0.0);
        if (surplus <= 0.0) continue;
        Split s = allocate_surplus(surplus, action, charge_left,
                                   cfg_.battery.tariff_charge);
        res.allocations[i].surplus_battery = s.battery;
        res.allocations[i].surplus_provider = s.provider;
        charge_left -= s.battery;
        res.battery_charge_kwh += s.battery;
        res.sp_surplus_kwh += s.provider;
    }

    double discharge_left = discharge_headroom(cfg_.battery, battery_);
    for (std::size_t i = 0; i < n; ++i) {
        const CustomerProfile& c = cfg_.customers[i];
        double net_demand = std::max(c.demand_kwh[t] - c.generation_kwh[t], 0.0);
        if (net_demand <= 0.0) continue;
        Split s = allocate_demand(net_demand, action, discharge_left,
                                  cfg_.battery.tariff_discharge);
        res.allocations[i].demand_battery = s.battery;
        res.allocations[i].demand_provider = s.provider;
        discharge_left -= s.battery;
        res.battery_discharge_kwh += s.battery;
        res.sp_demand_kwh += s.provider;
    }

    battery_ = apply_step(cfg_.battery, battery_,
                          BatteryStepFlows{res.battery_charge_kwh,
                                           res.battery_discharge_kwh});
    res.soc_after = battery_.soc;

    double consumer_total = 0.0, prosumer_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const StepAllocation& a = res.allocations[i];
        if (cfg_.customers[i].kind == CustomerKind::Consumer) {
            double phi = consumer_cost(a, action, cfg_.battery.tariff_discharge);
            res.consumer_costs.push_back(phi);
            consumer_total += phi;
        } else {
            double phi = prosumer_cost(a, action, cfg_.battery.tariff_discharge,
                                       cfg_.battery.tariff_charge);
            res.prosumer_costs.push_back(phi);
            prosumer_total += phi;
        }
    }

    res.provider_cost = provider_cost(res.sp_demand_kwh, res.sp_surplus_kwh,
                                      action, cfg_.provider);
    res.operation_cost = operation_cost(res.provider_cost, consumer_total,
                                        prosumer_total, cfg_.weights);
    res.reward = reward_from_cost(res.operation_cost);
    res.cashflows = settle_cashflows(res.allocations, action, cfg_.battery,
                                     cfg_.provider);

    Transition tr;
    tr.state = obs_;
    tr.action = action_index;
    tr.reward = res.reward;

    ++step_count_;
    tr.done = done();
    obs_ = EnvObservation{battery_.soc, res.sp_demand_kwh, (hour + 1) % 24};
    tr.next_state = obs_;

    return {tr, res};
}

} // namespace mg
