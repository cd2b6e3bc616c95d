#pragma once
// Price-responsive customer behavior: each customer routes its net demand
// (or a prosumer its surplus) between the community battery and the
// service provider, whichever price is better, with the battery capped by
// the shared headroom. Pricing is linear in quantity, so all comparisons
// happen on per-kWh coefficients.

#include <cstdint>
#include <vector>

namespace mg {

enum class CustomerKind { Consumer, Prosumer };

struct CustomerProfile {
    int id = 0;
    CustomerKind kind = CustomerKind::Consumer;
    std::vector<double> demand_kwh;     // hourly load
    std::vector<double> generation_kwh; // hourly PV output; all zero for consumers
};

struct PriceAction {
    double retail = 0.0;   // provider sells at this coefficient
    double purchase = 0.0; // provider buys surplus at this coefficient
};

// Per-customer outcome for one step. At most one of the demand pair and
// the surplus pair is nonzero: a customer is either short or long, never
// both.
struct StepAllocation {
    double demand_battery = 0.0;  // kWh drawn from the battery
    double demand_provider = 0.0; // kWh bought from the provider
    double surplus_battery = 0.0; // kWh stored into the battery
    double surplus_provider = 0.0;// kWh sold to the provider
};

struct Split {
    double battery = 0.0;
    double provider = 0.0;
};

// Battery is used only when strictly cheaper than retail; whatever it
// cannot cover spills to the provider. battery_available is the remaining
// shared discharge headroom.
Split allocate_demand(double net_demand, const PriceAction& action,
                      double battery_available, double tariff_discharge);

// Battery is used only when it pays strictly more than the provider;
// overflow is sold to the provider. charge_available is the remaining
// shared charge headroom.
Split allocate_surplus(double surplus, const PriceAction& action,
                       double charge_available, double tariff_charge);

// tariff_discharge * d_b + retail * d_sp
double consumer_cost(const StepAllocation& alloc, const PriceAction& action,
                     double tariff_discharge);

// Adds the sale legs: negative values are profit.
double prosumer_cost(const StepAllocation& alloc, const PriceAction& action,
                     double tariff_discharge, double tariff_charge);

} // namespace mg
