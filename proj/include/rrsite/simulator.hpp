#pragma once

#include "rrsite/battery.hpp"
#include "rrsite/controller.hpp"
#include "rrsite/forecast.hpp"
#include "rrsite/params.hpp"
#include "rrsite/trace.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rrsite {

enum class ControllerKind { drc_rs, rrm, oracle };
std::string to_string(ControllerKind kind);
ControllerKind controller_kind_from_string(const std::string& name);

enum class ViolationPolicy { abort, count };

// Traffic series are normalized to [0,1]; harvest series are joules per slot.
struct TraceSet {
    TraceSeries traffic_a;
    TraceSeries traffic_b;
    TraceSeries solar;
    TraceSeries wind;
};

// Four independent synthetic series derived from one seed; the second
// operator's daily profile is shifted by two hours.
TraceSet synth_traces(std::size_t n_slots, std::uint64_t seed, const SynthOptions& options = {});

struct Scenario {
    TraceSet traces;
    RadioParams radio;
    ComputeParams compute;
    BatteryParams battery;
    ControllerKind controller = ControllerKind::drc_rs;
    CostWeights weights;
    F2Reference f2_reference = F2Reference::capacity;
    double sensitive_fraction = kDefaultSensitiveFraction;
    double reservation_fraction = 0.6;
    std::size_t horizon = 3;
    int n_users = 20;
    double per_user_bits = 2.0e6; // offered bits per user and slot at the normalized peak
    std::size_t warmup_slots = 672; // history the predictors are fitted on, precedes slot 0
    std::size_t n_slots = 1488;
    PredictorConfig predictor;
    std::optional<ControlGrid> grid; // full grid when empty
    ViolationPolicy on_violation = ViolationPolicy::abort;
    std::uint64_t seed = 1;

    void validate() const;
    ControlGrid effective_grid() const;
};

ControllerContext make_context(const Scenario& scenario);

struct SlotRecord {
    std::size_t slot = 0;
    double energy_j = 0.0;
    EnergyClass energy_class = EnergyClass::nominal;
    HarvestSlot harvest;
    double load_a_bits = 0.0;
    double load_b_bits = 0.0;
    ControlInput control;
    EnergyBreakdown energy;
    double energy_next_j = 0.0;
    double q_in_bits = 0.0;  // after the slot
    double q_out_bits = 0.0; // after the slot
    double slot_delay_s = 0.0;
    double path_delay_s = 0.0;
    double cost = 0.0;          // realized weighted cost
    double expected_cost = 0.0; // cost of the planned sequence
    int depth = 0;
    bool emergency = false;
    bool relaxed = false;
    bool shed = false; // service dropped at realization to respect the stored energy
};

struct SimSummary {
    ControllerKind controller = ControllerKind::drc_rs;
    int n_users = 0;
    std::size_t n_slots = 0;
    double baseline_j = 0.0;
    double mean_site_j = 0.0;
    double savings_pct = 0.0;
    EnergyBreakdown mean_energy;
    double mean_cost = 0.0;
    double min_energy_j = 0.0;
    double max_energy_j = 0.0;
    double final_energy_j = 0.0;
    double max_slot_delay_s = 0.0;
    double max_path_delay_s = 0.0;
    double delay_bound_s = 0.0;
    std::size_t violations = 0;
    std::size_t emergencies = 0;
    std::size_t relaxed_slots = 0;
    std::size_t shed_slots = 0;
    std::size_t sleep_slots = 0;
};

struct SimReport {
    std::vector<SlotRecord> records;
    SimSummary summary;
};

using RecordSink = std::function<void(const SlotRecord&)>;

// Throws InfeasibleConfig before the first slot when the platform fails the
// feasibility check. Under ViolationPolicy::abort any broken invariant is
// rethrown with the slot index.
SimReport run(const Scenario& scenario, const RecordSink& sink = {}, bool keep_records = true);

double baseline_energy(const Scenario& scenario);

struct SavingsPoint {
    int n_users = 0;
    double drc_rs_pct = 0.0;
    double rrm_pct = 0.0;
};

std::vector<SavingsPoint> savings_curve(const Scenario& scenario, const std::vector<int>& user_counts);

} // namespace rrsite
