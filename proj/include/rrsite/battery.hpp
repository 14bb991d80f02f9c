#pragma once

#include <optional>
#include <string>

namespace rrsite {

struct BatteryParams {
    double e_max_j = 490.0e3;
    double e_low_j = 0.3 * 490.0e3;
    double e_up_j = 0.7 * 490.0e3;
    double leakage_j = 2.0e-6;       // a, per slot
    double e_init_j = 0.7 * 490.0e3;
    // Solar below this fraction of the solar peak counts as off-peak.
    double offpeak_fraction = 0.05;

    void validate() const;
};

enum class HarvestSource { solar, wind, both };
std::string to_string(HarvestSource s);

struct HarvestSlot {
    double solar_j = 0.0;
    double wind_j = 0.0;
    double selected_j = 0.0;
    HarvestSource source = HarvestSource::solar;
};

// Energy-manager policy. The source is decided on `forecast_solar` when given
// (the controller only knows forecasts when it commits), the amounts come from
// `solar`/`wind`. A deficient buffer takes both sources.
HarvestSlot select_source(double solar_j, double wind_j, double energy_j, const BatteryParams& params,
                          double offpeak_threshold_j, std::optional<double> forecast_solar_j = std::nullopt);

// E' = min(E + H - theta - a, E_max), floored at 0. Throws EnergyViolation
// when theta > E.
double step(double energy_j, double harvest_j, double theta_site_j, const BatteryParams& params);

enum class EnergyClass { deficient, nominal, surplus };
std::string to_string(EnergyClass c);
EnergyClass classify(double energy_j, const BatteryParams& params);

} // namespace rrsite
