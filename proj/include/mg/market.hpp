#pragma once
// Provider-side accounting: utility-grid purchases, the provider's net
// cost, the weighted microgrid operation cost that the agent minimizes,
// and a closed cash ledger across every agent so conservation is
// checkable at each step.

#include <span>
#include <vector>

#include "mg/battery.hpp"
#include "mg/customer.hpp"

namespace mg {

struct ProviderConfig {
    double sigma = 0.15; // utility-grid price coefficient, below min retail
};

struct WeightConfig {
    double alpha = 0.3; // consumer-cost weight
    double beta = 0.3;  // prosumer-cost weight

    double provider_weight() const { return 1.0 - alpha - beta; }
    void validate() const; // throws std::invalid_argument
};

// sigma * total demand routed to the provider.
double ug_cost(double sp_demand_kwh, const ProviderConfig& cfg);

// c(demand) + purchase * surplus - retail * demand. Negative is profit.
double provider_cost(double sp_demand_kwh, double sp_surplus_kwh,
                     const PriceAction& action, const ProviderConfig& cfg);

// (1 - alpha - beta) * psi + alpha * sum consumer costs + beta * sum
// prosumer costs.
double operation_cost(double provider_cost, double consumer_cost_total,
                      double prosumer_cost_total, const WeightConfig& weights);

inline double reward_from_cost(double operation_cost) { return -operation_cost; }

// Signed money received per agent this step (payments are negative).
struct Cashflows {
    std::vector<double> customers;
    double provider = 0.0;
    double battery_operator = 0.0;
    double utility_grid = 0.0;

    double sum() const;
};

// Books every cash leg implied by the allocations: customers settle their
// bills, the provider nets retail revenue against surplus purchases and
// utility-grid cost, the battery operator nets discharge fees against
// charge payments, the utility grid collects. Always sums to zero.
Cashflows settle_cashflows(std::span<const StepAllocation> allocations,
                           const PriceAction& action,
                           const BatteryConfig& battery,
                           const ProviderConfig& provider);

} // namespace mg
