#pragma once

// Second, independent evaluation of the per-slot site energy written as one
// expression over the raw control vectors. Shares no code with site_model.

#include "rrsite/params.hpp"
#include "rrsite/site_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oracle {

inline double sum_sq_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
        const double d = (i < b.size() ? b[i] : 0.0) - (i < a.size() ? a[i] : 0.0);
        s += d * d;
    }
    return s;
}

inline double site_energy(const rrsite::ControlInput& c, const rrsite::SiteState& s, double served,
                          const rrsite::RadioParams& r, const rrsite::ComputeParams& p) {
    const double fmax = *std::max_element(p.f_levels.begin(), p.f_levels.end());
    const double admitted = std::accumulate(c.gamma.begin(), c.gamma.end(), 0.0);
    return c.sigma * r.bs_power_w * p.slot_s +
           (served > 0.0 ? served * (std::pow(2.0, r.target_rate_bps / (c.zeta * r.bandwidth_hz)) - 1.0) *
                               r.noise_w_per_hz * std::pow(r.inter_site_m, r.path_loss_exp) / r.path_loss_const
                         : 0.0) +
           r.backhaul_power_w * p.slot_s + r.data_j_per_byte * admitted / 8.0 +
           std::accumulate(c.f.begin(), c.f.end(), 0.0,
                           [&](double acc, double f) {
                               return acc + p.container_idle_j +
                                      (f / fmax) * (f / fmax) * (p.container_max_j - p.container_idle_j);
                           }) +
           p.switch_cost * sum_sq_diff(s.f_prev, c.f) + (c.nic == 1 ? p.nic_max_j : p.nic_idle_j) +
           std::accumulate(c.gamma.begin(), c.gamma.end(), 0.0,
                           [&](double acc, double g) {
                               return acc + 2.0 * p.link_power_w / (p.slot_s - p.max_processing_s) *
                                                std::pow(p.link_rtt_s * g, 2.0);
                           }) +
           std::accumulate(c.dequeue.begin(), c.dequeue.end(), 0.0) * p.driver_j_per_s / r.target_rate_bps +
           p.cache_lambda * (p.cache_tr_j + p.cache_j);
}

} // namespace oracle
