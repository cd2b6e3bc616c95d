#include "mg/customer.hpp"

#include <algorithm>

namespace mg {

Split allocate_demand(double net_demand, const PriceAction& action,
                      double battery_available, double tariff_discharge) {
    Split s;
    if (net_demand <= 0.0) return s;
    if (tariff_discharge < action.retail) {
        s.battery = std::min(net_demand, std::max(0.0, battery_available));
        s.provider = net_demand - s.battery;
    } else {
        // Ties go to the provider: no reason to pay conversion losses.
        s.provider = net_demand;
    }
    return s;
}

Split allocate_surplus(double surplus, const PriceAction& action,
                       double charge_available, double tariff_charge) {
    Split s;
    if (surplus <= 0.0) return s;
    if (tariff_charge > action.purchase) {
        s.battery = std::min(surplus, std::max(0.0, charge_available));
        s.provider = surplus - s.battery;
    } else {
        s.provider = surplus;
    }
    return s;
}

double consumer_cost(const StepAllocation& alloc, const PriceAction& action,
                     double tariff_discharge) {
    return tariff_discharge * alloc.demand_battery + action.retail * alloc.demand_provider;
}

double prosumer_cost(const StepAllocation& alloc, const PriceAction& action,
                     double tariff_discharge, double tariff_charge) {
    return tariff_discharge * alloc.demand_battery + action.retail * alloc.demand_provider -
           tariff_charge * alloc.surplus_battery - action.purchase * alloc.surplus_provider;
}

} // namespace mg
