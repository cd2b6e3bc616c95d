#include "mg/battery.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mg {

BatteryConfig BatteryConfig::with_capacity(double capacity_kwh) {
    BatteryConfig cfg;
    cfg.capacity_kwh = capacity_kwh;
    cfg.charge_cap_kwh = 0.05 * capacity_kwh;
    cfg.discharge_cap_kwh = 0.05 * capacity_kwh;
    return cfg;
}

void BatteryConfig::validate() const {
    if (!(capacity_kwh > 0.0))
        throw std::invalid_argument("battery: capacity_kwh must be positive");
    if (!(efficiency > 0.0 && efficiency <= 1.0))
        throw std::invalid_argument("battery: efficiency must be in (0, 1]");
    if (!(soc_min >= 0.0 && soc_min < soc_max && soc_max <= 1.0))
        throw std::invalid_argument("battery: need 0 <= soc_min < soc_max <= 1");
    if (!(soc_init >= soc_min && soc_init <= soc_max))
        throw std::invalid_argument("battery: soc_init outside [soc_min, soc_max]");
    if (charge_cap_kwh < 0.0 || discharge_cap_kwh < 0.0)
        throw std::invalid_argument("battery: power caps must be non-negative");
    if (tariff_discharge < 0.0 || tariff_charge < 0.0)
        throw std::invalid_argument("battery: tariffs must be non-negative");
}

double charge_headroom(const BatteryConfig& cfg, const BatteryState& st) {
    double soc_room = (cfg.soc_max - st.soc) * cfg.capacity_kwh / cfg.efficiency;
    return std::max(0.0, std::min(cfg.charge_cap_kwh, soc_room));
}

double discharge_headroom(const BatteryConfig& cfg, const BatteryState& st) {
    double soc_room = (st.soc - cfg.soc_min) * cfg.capacity_kwh * cfg.efficiency;
    return std::max(0.0, std::min(cfg.discharge_cap_kwh, soc_room));
}

BatteryState apply_step(const BatteryConfig& cfg, const BatteryState& st,
                        const BatteryStepFlows& flows) {
    // Aggregated flows may exceed the headroom by accumulated rounding when
    // several customers share it; anything past that is a dispatch bug.
    const double slack = 1e-9 * std::max(1.0, cfg.capacity_kwh);
    if (flows.charge_kwh < 0.0 || flows.discharge_kwh < 0.0)
        throw std::logic_error("battery: negative flow");
    if (flows.charge_kwh > charge_headroom(cfg, st) + slack)
        throw std::logic_error("battery: charge " + std::to_string(flows.charge_kwh) +
                               " kWh exceeds headroom");
    if (flows.discharge_kwh > discharge_headroom(cfg, st) + slack)
        throw std::logic_error("battery: discharge " + std::to_string(flows.discharge_kwh) +
                               " kWh exceeds headroom");

    double delta = (flows.charge_kwh * cfg.efficiency -
                    flows.discharge_kwh / cfg.efficiency) / cfg.capacity_kwh;
    BatteryState next;
    next.soc = std::clamp(st.soc + delta, cfg.soc_min, cfg.soc_max);
    return next;
}

} // namespace mg
