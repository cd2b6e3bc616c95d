#pragma once
// Community battery: state-of-charge dynamics with a safe SOC interval and
// inverter limits on per-step charge/discharge energy. One step is one
// hour, so kW limits and kWh-per-step limits coincide.

namespace mg {

struct BatteryConfig {
    double capacity_kwh = 30.0;
    double efficiency = 0.9;        // conversion efficiency, in (0, 1]
    double soc_min = 0.1;
    double soc_max = 0.9;
    double soc_init = 0.5;
    double charge_cap_kwh = 1.5;    // max energy accepted per step
    double discharge_cap_kwh = 1.5; // max energy delivered per step
    double tariff_discharge = 0.3;  // paid by customers per kWh drawn
    double tariff_charge = 0.6;     // paid to prosumers per kWh stored

    // Default construction: both power caps at 5% of capacity.
    static BatteryConfig with_capacity(double capacity_kwh);

    void validate() const; // throws std::invalid_argument
};

struct BatteryState {
    double soc = 0.5;
};

struct BatteryStepFlows {
    double charge_kwh = 0.0;    // energy accepted from prosumers
    double discharge_kwh = 0.0; // energy delivered to customers
};

// Largest charge the battery can accept this step without SOC exceeding
// soc_max: min(charge_cap, (soc_max - soc) * capacity / efficiency).
double charge_headroom(const BatteryConfig& cfg, const BatteryState& st);

// Largest discharge deliverable this step without SOC dropping below
// soc_min: min(discharge_cap, (soc - soc_min) * capacity * efficiency).
double discharge_headroom(const BatteryConfig& cfg, const BatteryState& st);

// Advances SOC by (charge * eta - discharge / eta) / capacity. Both flows
// must respect the start-of-step headrooms (a violation beyond rounding
// noise is a dispatch bug and throws std::logic_error). The result is
// pinned to [soc_min, soc_max] to absorb last-ulp rounding.
BatteryState apply_step(const BatteryConfig& cfg, const BatteryState& st,
                        const BatteryStepFlows& flows);

} // namespace mg
