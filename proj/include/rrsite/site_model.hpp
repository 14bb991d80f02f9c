#pragma once

#include "rrsite/params.hpp"

#include <span>
#include <string>
#include <vector>

namespace rrsite {

// Controller-visible state at the beginning of a slot. Data quantities are
// whole bits stored as doubles (exact below 2^53).
struct SiteState {
    double zeta = 1.0;
    int sigma = 1;
    int containers = 1;
    int drivers = 0;
    double energy_j = 0.0;
    double q_in_bits = 0.0;
    double q_out_bits = 0.0;
    std::vector<double> f_prev; // per-container rate applied in the previous slot

    bool operator==(const SiteState&) const = default;
};

// Full decision vector for one slot.
struct ControlInput {
    double zeta = 1.0;
    int sigma = 1;
    int containers = 1;
    std::vector<double> f;       // per-container rate, one entry per active container
    std::vector<double> gamma;   // per-container task bits
    std::vector<double> rate;    // per-container link rate, bits/s
    int nic = 0;                 // delta
    int drivers = 0;
    std::vector<double> dequeue; // per-driver bits moved out of the output buffer

    double gamma_star() const;
    double dequeued() const;
    bool operator==(const ControlInput&) const = default;
};

struct EnergyBreakdown {
    double comm = 0.0;
    double cp = 0.0;
    double sw = 0.0;
    double of = 0.0;
    double lk = 0.0;
    double ls = 0.0;
    double ch = 0.0;
    double comp = 0.0;
    double site = 0.0;
};

// comp and site are always derived here so every breakdown in the code base
// sums its parts in the same order.
EnergyBreakdown make_breakdown(double comm, double cp, double sw, double of, double lk, double ls, double ch);

struct Admission {
    double gamma_star = 0.0;
    double share_a = 0.0;
    double share_b = 0.0;
};

// Delay-sensitive part of both operators, capped at `cap` with proportional
// scaling of the shares. Results are whole bits.
Admission admit(double load_a, double load_b, double sensitive_fraction, double cap);

double load_power(double load_bits, double zeta, const RadioParams& radio);
double comm_energy(int sigma, double zeta, double served_load_bits, double gamma_star, const RadioParams& radio,
                   double slot_s);

double cp_energy(std::span<const double> f, const ComputeParams& cp);
// Vectors of different length are padded with zero-rate entries.
double sw_energy(std::span<const double> f_prev, std::span<const double> f_now, double k_e);
double offload_energy(int nic, const ComputeParams& cp);

struct LinkAssignment {
    std::vector<double> rates;
    double energy_j = 0.0;
};
LinkAssignment link_energy(std::span<const double> gamma, const ComputeParams& cp);
// Energy part of link_energy without building the rate vector.
double link_energy_j(std::span<const double> gamma, const ComputeParams& cp);
double link_rate(double gamma_bits, const ComputeParams& cp);

double laser_energy(std::span<const double> l_d, double m_d, double r0, int max_drivers);
double cache_energy(double lambda_bar, double theta_tr, double theta_cache);

// comm is left at zero.
EnergyBreakdown comp_energy(const ControlInput& control, const SiteState& state, const ComputeParams& cp,
                            double r0);
EnergyBreakdown site_energy(const ControlInput& control, const SiteState& state, double served_load_bits,
                            const RadioParams& radio, const ComputeParams& cp);

struct QueueCaps {
    double in_bits = 0.0;
    double out_bits = 0.0;
};
struct QueueLevels {
    double q_in = 0.0;
    double q_out = 0.0;
};

// Lindley recursion for both buffers. With `loss_free` set, any truncation by
// the caps raises InvariantViolation.
QueueLevels queue_step(double q_in, double q_out, double gamma_star, double processed, double dequeued,
                       const QueueCaps& caps, bool loss_free = true);

// Bits the active containers can take out of the input buffer this slot.
double processing_capacity(std::span<const double> f, const ComputeParams& cp);

struct FeasibilityReport {
    bool feasible = false;
    bool rate_condition = false;       // (r_max/2)(tau - Delta) >= L_in
    bool processing_condition = false; // sum_c f_max Delta >= r_min
    std::string detail;
};
FeasibilityReport check_feasibility(const ComputeParams& cp, double input_buffer_bits);

double delay_bound(double input_buffer_bits, double output_buffer_bits, double r_min);

// max_c 2 gamma_c / r_c + Delta.
double slot_delay(const ControlInput& control, const ComputeParams& cp);

// Queue delays at the guaranteed rate r_min plus the two service times
// (processing and optical transfer at r0).
double path_delay(double q_in_after, double q_out_after, const ControlInput& control, const ComputeParams& cp,
                  double r0);

} // namespace rrsite
