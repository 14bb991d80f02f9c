#pragma once

#include "rrsite/battery.hpp"
#include "rrsite/params.hpp"
#include "rrsite/site_model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace rrsite {

struct CostWeights {
    double upsilon = 0.5; // weight of the energy term, 1 - upsilon goes to admission

    void validate() const;
};

// Reference of the admission term: the offered sensitive load of the slot or
// the input-buffer capacity.
enum class F2Reference { offered, capacity };
std::string to_string(F2Reference r);
F2Reference f2_reference_from_string(const std::string& name);

struct ControlGrid {
    std::vector<double> zeta_levels;
    std::vector<int> sigma_options;
    std::vector<int> container_counts;
    std::vector<double> f_levels;
    std::vector<int> driver_counts;
    std::vector<int> nic_options;

    static ControlGrid full(const ComputeParams& cp);
    std::size_t product_size() const;
    // Axes must be non-empty, sorted, unique and inside the platform limits.
    void validate(const ComputeParams& cp) const;
};

// Forecast of one future slot as seen by the controller: offered bits per
// operator and the harvest the energy manager is expected to deliver.
struct SlotForecast {
    double load_a = 0.0;
    double load_b = 0.0;
    double harvest_j = 0.0;
};

struct ControllerContext {
    RadioParams radio;
    ComputeParams compute;
    BatteryParams battery;
    CostWeights weights;
    F2Reference f2_reference = F2Reference::capacity;
    double sensitive_fraction = 0.8;
    double baseline_j = 1.0; // normalizer of the energy term, > 0

    double capacity_bits() const { return compute.input_buffer_bits; }
    double delay_bound_s() const;
};

// Site energy of the always-max control at design capacity: sigma = 1,
// zeta = 1, every container at f_max, NIC on, every driver on, the input
// buffer filled once per slot, no frequency switching.
double max_capacity_energy(const ControllerContext& ctx);

// Decision axes of one slot. Task bits, link rates and dequeues follow from
// these plus the admission.
struct ControlShape {
    double zeta = 1.0;
    int sigma = 1;
    int containers = 1;
    double f = 0.0;
    int drivers = 0;
    int nic = 0;

    bool operator==(const ControlShape&) const = default;
};

ControlShape shape_of(const ControlInput& c);

// Equal split, remainder bits to the lowest indices. Throws InfeasibleControl
// when gamma_star > count * cap.
std::vector<double> allocate_tasks(double gamma_star, int count, double cap);

// Admission the controller plans with: nothing while asleep, otherwise the
// sensitive forecast capped by the free input buffer and `extra_cap`.
Admission plan_admission(int sigma, const SiteState& state, double load_a, double load_b,
                         const ControllerContext& ctx, double extra_cap = -1.0);

// Bits the containers of `shape` can admit within the slot.
double shape_capacity_bits(const ControlShape& shape, const ComputeParams& cp);

// Builds the full control for `shape` given an admission, or nullopt when any
// of the hard constraints fails (minimum containers, task cap, in-slot
// processing, aggregate link rate, NIC on whenever data moves, every pending
// output bit dequeued by the drivers, slot delay, path delay).
std::optional<ControlInput> build_control(const ControlShape& shape, const SiteState& state, double gamma_star,
                                          const ControllerContext& ctx);

// Bits processed and queue levels after applying `control`.
double processed_bits(const ControlInput& control, const SiteState& state, const ComputeParams& cp);
QueueLevels next_queues(const ControlInput& control, const SiteState& state, const ComputeParams& cp);

double served_load(const ControlInput& control, double load_a, double load_b);

// Every feasible control of the grid in Cartesian order
// (zeta, sigma, containers, f, drivers, nic), innermost last.
std::vector<ControlInput> enumerate_controls(const SiteState& state, const ControlGrid& grid,
                                             const SlotForecast& forecast, const ControllerContext& ctx);

// Weighted cost from an already computed site energy.
double cost_from_energy(double theta_site_j, double gamma_star, const SlotForecast& forecast,
                        const ControllerContext& ctx);
double cost_J(const SiteState& state, const ControlInput& control, const SlotForecast& forecast,
              const ControllerContext& ctx);

// Whether the buffer floor applies to a transition (the strict search phase).
enum class EnergyRule { floor_and_budget, budget_only };

// Next state under forecast harvest, or nullopt when the control draws more
// than the stored energy or (under floor_and_budget) leaves the buffer below
// min(E_low, E).
std::optional<SiteState> transition(const SiteState& state, const ControlInput& control,
                                     const SlotForecast& forecast, const ControllerContext& ctx,
                                     EnergyRule rule = EnergyRule::floor_and_budget);

bool energy_admissible(double energy_j, double next_energy_j, const BatteryParams& battery, EnergyRule rule);

struct Decision {
    ControlInput control;
    double expected_cost = 0.0;
    int depth = 0;          // length of the chosen sequence
    bool emergency = false; // no feasible first control
    bool relaxed = false;   // buffer floor dropped to find a sequence
};

ControlInput emergency_control(const ControlGrid& grid, const ComputeParams& cp);

// Ordering key of a first control: site energy, containers, drivers, zeta,
// position in the Cartesian enumeration.
struct RootRank {
    double theta = 0.0;
    int containers = 0;
    int drivers = 0;
    double zeta = 0.0;
    std::size_t index = 0;

    auto operator<=>(const RootRank&) const = default;
};

std::size_t grid_index(const ControlShape& shape, const ControlGrid& grid);

// Limited-lookahead controller. forecasts[k] describes slot t+k; the search
// depth is forecasts.size().
Decision drc_rs(const SiteState& state, const std::vector<SlotForecast>& forecasts, const ControlGrid& grid,
                const ControllerContext& ctx);

// Exhaustive recursion over enumerate_controls with the same ordering.
Decision oracle_search(const SiteState& state, const std::vector<SlotForecast>& forecasts, const ControlGrid& grid,
                       const ControllerContext& ctx);

// Fixed reservation of a fraction of every resource.
Decision rrm(const SiteState& state, const SlotForecast& forecast, const ControlGrid& grid,
             const ControllerContext& ctx, double reservation_fraction);

} // namespace rrsite
