#include "rrsite/params.hpp"

#include "rrsite/errors.hpp"

#include <algorithm>

namespace rrsite {

void RadioParams::validate() const {
    if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be positive");
    if (!(target_rate_bps > 0.0)) throw DomainError("target rate r0 must be positive");
    if (!(path_loss_exp >= 2.0)) throw DomainError("path-loss exponent must be >= 2");
    if (!(path_loss_const > 0.0)) throw DomainError("path-loss constant must be positive");
    if (noise_w_per_hz < 0.0 || inter_site_m < 0.0) throw DomainError("noise density and distance must be >= 0");
    if (bs_power_w < 0.0 || backhaul_power_w < 0.0 || data_j_per_byte < 0.0) {
        throw DomainError("radio powers and costs must be >= 0");
    }
}

void ComputeParams::validate() const {
    if (min_containers < 1) throw DomainError("minimum container count must be >= 1");
    if (min_containers > max_containers) throw DomainError("minimum container count exceeds maximum");
    if (!(max_processing_s > 0.0 && max_processing_s < slot_s)) {
        throw DomainError("max processing time must satisfy 0 < Delta < tau");
    }
    if (f_levels.empty() || f_levels.front() != 0.0) throw DomainError("f_levels must start at 0");
    if (!std::is_sorted(f_levels.begin(), f_levels.end()) ||
        std::adjacent_find(f_levels.begin(), f_levels.end()) != f_levels.end()) {
        throw DomainError("f_levels must be strictly increasing");
    }
    if (!(f_max() > 0.0)) throw DomainError("f_levels needs a positive maximum");
    if (min_link_rate_bps <= 0.0 || min_link_rate_bps > max_link_rate_bps) {
        throw DomainError("link rates must satisfy 0 < r_min <= r_max");
    }
    if (max_drivers < 0) throw DomainError("driver count must be >= 0");
    if (container_idle_j < 0.0 || container_max_j < container_idle_j) {
        throw DomainError("container energies must satisfy 0 <= idle <= max");
    }
    if (switch_cost < 0.0 || nic_idle_j < 0.0 || nic_max_j < 0.0 || link_power_w < 0.0 || link_rtt_s < 0.0 ||
        driver_j_per_s < 0.0 || cache_lambda < 0.0 || cache_tr_j < 0.0 || cache_j < 0.0) {
        throw DomainError("energy constants must be >= 0");
    }
    if (max_task_bits <= 0.0 || input_buffer_bits < 0.0 || output_buffer_bits < 0.0) {
        throw DomainError("buffer and task sizes must be >= 0");
    }
    if (!(max_delay_s > 0.0)) throw DomainError("tau_max must be positive");
}

} // namespace rrsite
