#include "mg/market.hpp"

#include <stdexcept>

namespace mg {

void WeightConfig::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0))
        throw std::invalid_argument("weights: alpha and beta must be in [0, 1]");
    if (alpha + beta > 1.0)
        throw std::invalid_argument("weights: alpha + beta must not exceed 1");
}

double ug_cost(double sp_demand_kwh, const ProviderConfig& cfg) {
    return cfg.sigma * sp_demand_kwh;
}

double provider_cost(double sp_demand_kwh, double sp_surplus_kwh,
                     const PriceAction& action, const ProviderConfig& cfg) {
    return ug_cost(sp_demand_kwh, cfg) + action.purchase * sp_surplus_kwh -
           action.retail * sp_demand_kwh;
}

double operation_cost(double provider_cost, double consumer_cost_total,
                      double prosumer_cost_total, const WeightConfig& weights) {
    return weights.provider_weight() * provider_cost +
           weights.alpha * consumer_cost_total + weights.beta * prosumer_cost_total;
}

double Cashflows::sum() const {
    double total = provider + battery_operator + utility_grid;
    for (double c : customers) total += c;
    return total;
}

Cashflows settle_cashflows(std::span<const StepAllocation> allocations,
                           const PriceAction& action,
                           const BatteryConfig& battery,
                           const ProviderConfig& provider) {
    Cashflows cash;
    cash.customers.reserve(allocations.size());

    double sp_demand = 0.0, sp_surplus = 0.0;
    double batt_in = 0.0, batt_out = 0.0;
    for (const StepAllocation& a : allocations) {
        // The prosumer formula covers consumers too: their surplus legs are zero.
        double bill = prosumer_cost(a, action, battery.tariff_discharge,
                                    battery.tariff_charge);
        cash.customers.push_back(-bill);
        sp_demand += a.demand_provider;
        sp_surplus += a.surplus_provider;
        batt_out += a.demand_battery;
        batt_in += a.surplus_battery;
    }

    cash.provider = action.retail * sp_demand - action.purchase * sp_surplus -
                    ug_cost(sp_demand, provider);
    cash.battery_operator = battery.tariff_discharge * batt_out -
                            battery.tariff_charge * batt_in;
    cash.utility_grid = ug_cost(sp_demand, provider);
    return cash;
}

} // namespace mg
