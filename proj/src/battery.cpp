#include "rrsite/battery.hpp"

#include "rrsite/errors.hpp"

#include <algorithm>
#include <sstream>

namespace rrsite {

void BatteryParams::validate() const {
    if (!(0.0 < e_low_j && e_low_j < e_up_j && e_up_j < e_max_j)) {
        throw DomainError("battery thresholds must satisfy 0 < E_low < E_up < E_max");
    }
    if (!(e_init_j >= 0.0 && e_init_j <= e_max_j)) throw DomainError("E_init must lie in [0, E_max]");
    if (leakage_j < 0.0) throw DomainError("leakage must be >= 0");
    if (!(offpeak_fraction >= 0.0 && offpeak_fraction <= 1.0)) {
        throw DomainError("off-peak fraction must lie in [0,1]");
    }
}

std::string to_string(HarvestSource s) {
    switch (s) {
    case HarvestSource::solar: return "solar";
    case HarvestSource::wind: return "wind";
    case HarvestSource::both: return "both";
    }
    return "unknown";
}

std::string to_string(EnergyClass c) {
    switch (c) {
    case EnergyClass::deficient: return "deficient";
    case EnergyClass::nominal: return "nominal";
    case EnergyClass::surplus: return "surplus";
    }
    return "unknown";
}

HarvestSlot select_source(double solar_j, double wind_j, double energy_j, const BatteryParams& params,
                          double offpeak_threshold_j, std::optional<double> forecast_solar_j) {
    if (solar_j < 0.0 || wind_j < 0.0 || energy_j < 0.0) throw DomainError("harvest and energy must be >= 0");
    HarvestSlot out;
    out.solar_j = solar_j;
    out.wind_j = wind_j;
    const double decide_on = forecast_solar_j.value_or(solar_j);
    if (energy_j < params.e_low_j) {
        out.source = HarvestSource::both;
        out.selected_j = solar_j + wind_j;
    } else if (decide_on >= offpeak_threshold_j) {
        out.source = HarvestSource::solar;
        out.selected_j = solar_j;
    } else {
        out.source = HarvestSource::wind;
        out.selected_j = wind_j;
    }
    return out;
}

double step(double energy_j, double harvest_j, double theta_site_j, const BatteryParams& params) {
    if (theta_site_j > energy_j) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "site consumption " << theta_site_j << " J exceeds stored energy " << energy_j << " J";
        throw EnergyViolation(msg.str());
    }
    const double next = energy_j + harvest_j - theta_site_j - params.leakage_j;
    return std::max(std::min(next, params.e_max_j), 0.0);
}

EnergyClass classify(double energy_j, const BatteryParams& params) {
    if (energy_j < params.e_low_j) return EnergyClass::deficient;
    if (energy_j >= params.e_up_j) return EnergyClass::surplus;
    return EnergyClass::nominal;
}

} // namespace rrsite
