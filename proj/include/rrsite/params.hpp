#pragma once

#include <cmath>
#include <vector>

namespace rrsite {

inline double dbm_per_hz_to_w(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

// Radio side of the site. Powers are in watts and are converted to joules per
// slot by multiplying with the slot length.
struct RadioParams {
    double bandwidth_hz = 1.0e6;                         // W
    double noise_w_per_hz = dbm_per_hz_to_w(-174.0);     // N0
    double inter_site_m = 2000.0;                        // K
    double path_loss_exp = 4.0;                          // alpha
    double path_loss_const = 1.0e-4;                     // beta (path loss)
    double target_rate_bps = 1.0e6;                      // r0
    double bs_power_w = 10.6;                            // theta_0
    double backhaul_power_w = 50.0;                      // theta_bk
    double data_j_per_byte = 0.008;                      // theta_data

    void validate() const;
};

enum class NicFormula { corrected, verbatim };

// MEC platform: containers, NIC offload, intra-site links, optical drivers,
// caching and buffers. Processing rates are Mbit/s; a container running at f
// handles f * 1e6 * max_processing_s bits per slot.
struct ComputeParams {
    int max_containers = 20;                             // C
    int min_containers = 1;                              // beta
    std::vector<double> f_levels{0.0, 50.0, 70.0, 90.0, 105.0};
    double container_idle_j = 4.0;
    double container_max_j = 10.0;
    double switch_cost = 0.005;                          // k_e, J per (rate unit)^2
    double max_processing_s = 0.8;                       // Delta
    double max_task_bits = 8.0e7;                        // gamma_max (10 MB)
    double nic_idle_j = 13.1;
    double nic_max_j = 20.0;
    NicFormula nic_formula = NicFormula::corrected;
    double link_power_w = 1.0;                           // Psi_c
    double link_rtt_s = 1.0e-6;                          // mean round-trip time
    double min_link_rate_bps = 1.0e6;                    // r_min
    double max_link_rate_bps = 1.0e8;                    // r_max
    int max_drivers = 6;                                 // D
    double driver_j_per_s = 1.0;                         // m_d
    double input_buffer_bits = 1.0e8;                    // L_in
    double output_buffer_bits = 1.0e8;                   // L_out
    double cache_lambda = 0.5;
    double cache_tr_j = 2.0;
    double cache_j = 3.0;
    double slot_s = 1800.0;                              // tau
    double max_delay_s = 1800.0;                         // tau_max

    double f_max() const { return f_levels.empty() ? 0.0 : f_levels.back(); }
    // Bits one container processes within a slot at rate f.
    double processing_bits(double f) const { return std::floor(f * 1.0e6 * max_processing_s); }

    void validate() const;
};

} // namespace rrsite
