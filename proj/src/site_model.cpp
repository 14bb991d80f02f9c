#include "rrsite/site_model.hpp"

#include "rrsite/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rrsite {

double ControlInput::gamma_star() const { return std::accumulate(gamma.begin(), gamma.end(), 0.0); }

double ControlInput::dequeued() const { return std::accumulate(dequeue.begin(), dequeue.end(), 0.0); }

EnergyBreakdown make_breakdown(double comm, double cp, double sw, double of, double lk, double ls, double ch) {
    EnergyBreakdown e;
    e.comm = comm;
    e.cp = cp;
    e.sw = sw;
    e.of = of;
    e.lk = lk;
    e.ls = ls;
    e.ch = ch;
    e.comp = cp + sw + of + lk + ls + ch;
    e.site = comm + e.comp;
    return e;
}

Admission admit(double load_a, double load_b, double sensitive_fraction, double cap) {
    if (load_a < 0.0 || load_b < 0.0 || cap < 0.0) throw DomainError("admission inputs must be >= 0");
    if (!(sensitive_fraction >= 0.0 && sensitive_fraction <= 1.0)) {
        throw DomainError("sensitive fraction must lie in [0,1]");
    }
    Admission out;
    const double want_a = std::floor(sensitive_fraction * load_a);
    const double want_b = std::floor(sensitive_fraction * load_b);
    const double cap_bits = std::floor(cap);
    if (want_a + want_b <= cap_bits) {
        out.share_a = want_a;
        out.share_b = want_b;
    } else {
        out.share_a = std::floor(cap_bits * (want_a / (want_a + want_b)));
        out.share_b = cap_bits - out.share_a;
    }
    out.gamma_star = out.share_a + out.share_b;
    return out;
}

double load_power(double load_bits, double zeta, const RadioParams& radio) {
    if (!(zeta > 0.0 && zeta <= 1.0)) throw DomainError("bandwidth fraction must lie in (0,1]");
    if (load_bits <= 0.0) return 0.0;
    const double spectral = std::exp2(radio.target_rate_bps / (zeta * radio.bandwidth_hz)) - 1.0;
    return load_bits * spectral * radio.noise_w_per_hz * std::pow(radio.inter_site_m, radio.path_loss_exp) /
           radio.path_loss_const;
}

double comm_energy(int sigma, double zeta, double served_load_bits, double gamma_star, const RadioParams& radio,
                   double slot_s) {
    return static_cast<double>(sigma) * radio.bs_power_w * slot_s + load_power(served_load_bits, zeta, radio) +
           radio.backhaul_power_w * slot_s + radio.data_j_per_byte * (gamma_star / 8.0);
}

namespace {

bool is_level(double f, const ComputeParams& cp) {
    return std::find(cp.f_levels.begin(), cp.f_levels.end(), f) != cp.f_levels.end();
}

} // namespace

double cp_energy(std::span<const double> f, const ComputeParams& cp) {
    const double f_max = cp.f_max();
    double total = 0.0;
    for (double fc : f) {
        if (!is_level(fc, cp)) throw DomainError("processing rate " + std::to_string(fc) + " is not an allowed level");
        const double ratio = fc / f_max;
        total += cp.container_idle_j + ratio * ratio * (cp.container_max_j - cp.container_idle_j);
    }
    return total;
}

double sw_energy(std::span<const double> f_prev, std::span<const double> f_now, double k_e) {
    const std::size_t n = std::max(f_prev.size(), f_now.size());
    double total = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        const double before = c < f_prev.size() ? f_prev[c] : 0.0;
        const double after = c < f_now.size() ? f_now[c] : 0.0;
        const double diff = after - before;
        total += k_e * diff * diff;
    }
    return total;
}

double offload_energy(int nic, const ComputeParams& cp) {
    if (cp.nic_formula == NicFormula::verbatim) {
        return static_cast<double>(nic) * cp.nic_idle_j + cp.nic_max_j;
    }
    return nic != 0 ? cp.nic_max_j : cp.nic_idle_j;
}

double link_rate(double gamma_bits, const ComputeParams& cp) {
    const double raw = 2.0 * gamma_bits / (cp.slot_s - cp.max_processing_s);
    return std::clamp(raw, cp.min_link_rate_bps, cp.max_link_rate_bps);
}

double link_energy_j(std::span<const double> gamma, const ComputeParams& cp) {
    const double coef = 2.0 * cp.link_power_w / (cp.slot_s - cp.max_processing_s);
    double energy = 0.0;
    for (double g : gamma) {
        const double x = cp.link_rtt_s * g;
        energy += coef * (x * x);
    }
    return energy;
}

LinkAssignment link_energy(std::span<const double> gamma, const ComputeParams& cp) {
    LinkAssignment out;
    out.rates.reserve(gamma.size());
    double total_rate = 0.0;
    for (double g : gamma) {
        if (g < 0.0 || g > cp.max_task_bits) {
            throw DomainError("task of " + std::to_string(g) + " bits exceeds the per-container cap");
        }
        const double r = link_rate(g, cp);
        out.rates.push_back(r);
        total_rate += r;
    }
    if (total_rate > cp.max_link_rate_bps) {
        throw InfeasibleControl("aggregate link rate " + std::to_string(total_rate) + " bit/s exceeds r_max");
    }
    out.energy_j = link_energy_j(gamma, cp);
    return out;
}

double laser_energy(std::span<const double> l_d, double m_d, double r0, int max_drivers) {
    if (static_cast<long>(l_d.size()) > max_drivers) {
        throw InfeasibleControl(std::to_string(l_d.size()) + " active drivers exceed the maximum of " +
                                std::to_string(max_drivers));
    }
    // m_d is one constant for all drivers, so the sum collapses to the total
    // transferred bits; this keeps the value independent of how bits are split.
    const double bits = std::accumulate(l_d.begin(), l_d.end(), 0.0);
    return m_d * bits / r0;
}

double cache_energy(double lambda_bar, double theta_tr, double theta_cache) {
    if (lambda_bar < 0.0) throw DomainError("cache response factor must be >= 0");
    return lambda_bar * (theta_tr + theta_cache);
}

EnergyBreakdown comp_energy(const ControlInput& control, const SiteState& state, const ComputeParams& cp, double r0) {
    const double cp_j = cp_energy(control.f, cp);
    const double sw_j = sw_energy(state.f_prev, control.f, cp.switch_cost);
    const double of_j = offload_energy(control.nic, cp);
    const double lk_j = link_energy(control.gamma, cp).energy_j;
    const double ls_j = laser_energy(control.dequeue, cp.driver_j_per_s, r0, cp.max_drivers);
    const double ch_j = cache_energy(cp.cache_lambda, cp.cache_tr_j, cp.cache_j);
    return make_breakdown(0.0, cp_j, sw_j, of_j, lk_j, ls_j, ch_j);
}

EnergyBreakdown site_energy(const ControlInput& control, const SiteState& state, double served_load_bits,
                            const RadioParams& radio, const ComputeParams& cp) {
    const EnergyBreakdown comp = comp_energy(control, state, cp, radio.target_rate_bps);
    const double comm = comm_energy(control.sigma, control.zeta, served_load_bits, control.gamma_star(), radio,
                                    cp.slot_s);
    return make_breakdown(comm, comp.cp, comp.sw, comp.of, comp.lk, comp.ls, comp.ch);
}

QueueLevels queue_step(double q_in, double q_out, double gamma_star, double processed, double dequeued,
                       const QueueCaps& caps, bool loss_free) {
    const double raw_in = std::max(q_in + gamma_star - processed, 0.0);
    const double raw_out = std::max(q_out + processed - dequeued, 0.0);
    QueueLevels next{std::min(raw_in, caps.in_bits), std::min(raw_out, caps.out_bits)};
    if (loss_free && (raw_in > caps.in_bits || raw_out > caps.out_bits)) {
        std::ostringstream msg;
        msg << "queue truncation under a feasible control (in " << raw_in << "/" << caps.in_bits << ", out "
            << raw_out << "/" << caps.out_bits << ")";
        throw InvariantViolation(msg.str());
    }
    return next;
}

double processing_capacity(std::span<const double> f, const ComputeParams& cp) {
    double bits = 0.0;
    for (double fc : f) bits += cp.processing_bits(fc);
    return bits;
}

FeasibilityReport check_feasibility(const ComputeParams& cp, double input_buffer_bits) {
    FeasibilityReport report;
    const double link_side = (cp.max_link_rate_bps / 2.0) * (cp.slot_s - cp.max_processing_s);
    report.rate_condition = link_side >= input_buffer_bits;
    // Evaluated at the largest configuration: C_max containers at f_max.
    const double processing_side = static_cast<double>(cp.max_containers) * cp.processing_bits(cp.f_max());
    report.processing_condition = processing_side >= cp.min_link_rate_bps;
    report.feasible = report.rate_condition && report.processing_condition;

    std::ostringstream detail;
    if (!report.rate_condition) {
        detail << "(r_max/2)(tau - Delta) >= L_in violated: " << link_side << " < " << input_buffer_bits;
    }
    if (!report.processing_condition) {
        if (!report.rate_condition) detail << "; ";
        detail << "sum_c f_c Delta >= r_min violated: " << processing_side << " < " << cp.min_link_rate_bps;
    }
    if (report.feasible) detail << "feasible";
    report.detail = detail.str();
    return report;
}

double delay_bound(double input_buffer_bits, double output_buffer_bits, double r_min) {
    if (!(r_min > 0.0)) throw DomainError("r_min must be positive");
    return (input_buffer_bits + output_buffer_bits) / r_min + 2.0;
}

double slot_delay(const ControlInput& control, const ComputeParams& cp) {
    double worst = 0.0;
    for (std::size_t c = 0; c < control.gamma.size(); ++c) {
        if (control.gamma[c] <= 0.0) continue;
        worst = std::max(worst, 2.0 * control.gamma[c] / control.rate[c]);
    }
    return worst + cp.max_processing_s;
}

double path_delay(double q_in_after, double q_out_after, const ControlInput& control, const ComputeParams& cp,
                  double r0) {
    double transfer = 0.0;
    for (double l : control.dequeue) transfer = std::max(transfer, l / r0);
    return (q_in_after + q_out_after) / cp.min_link_rate_bps + cp.max_processing_s + transfer;
}

} // namespace rrsite
