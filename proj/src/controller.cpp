#include "rrsite/controller.hpp"

#include "rrsite/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rrsite {

void CostWeights::validate() const {
    if (!(upsilon >= 0.0 && upsilon <= 1.0)) throw DomainError("upsilon must lie in [0,1]");
}

std::string to_string(F2Reference r) { return r == F2Reference::offered ? "offered" : "capacity"; }

F2Reference f2_reference_from_string(const std::string& name) {
    if (name == "offered") return F2Reference::offered;
    if (name == "capacity") return F2Reference::capacity;
    throw DomainError("unknown f2_reference '" + name + "'");
}

ControlGrid ControlGrid::full(const ComputeParams& cp) {
    ControlGrid g;
    for (int k = 1; k <= 10; ++k) g.zeta_levels.push_back(k / 10.0);
    g.sigma_options = {0, 1};
    for (int c = cp.min_containers; c <= cp.max_containers; ++c) g.container_counts.push_back(c);
    g.f_levels = cp.f_levels;
    for (int d = 0; d <= cp.max_drivers; ++d) g.driver_counts.push_back(d);
    g.nic_options = {0, 1};
    return g;
}

std::size_t ControlGrid::product_size() const {
    return zeta_levels.size() * sigma_options.size() * container_counts.size() * f_levels.size() *
           driver_counts.size() * nic_options.size();
}

namespace {

template <typename T>
bool strictly_increasing(const std::vector<T>& v) {
    return std::adjacent_find(v.begin(), v.end(), [](const T& a, const T& b) { return !(a < b); }) == v.end();
}

template <typename T>
std::size_t index_in(const std::vector<T>& axis, T value, const char* name) {
    const auto it = std::find(axis.begin(), axis.end(), value);
    if (it == axis.end()) throw DomainError(std::string("control value not on the grid axis ") + name);
    return static_cast<std::size_t>(it - axis.begin());
}

bool is_binary(const std::vector<int>& v) {
    return std::all_of(v.begin(), v.end(), [](int x) { return x == 0 || x == 1; });
}

} // namespace

void ControlGrid::validate(const ComputeParams& cp) const {
    if (zeta_levels.empty() || sigma_options.empty() || container_counts.empty() || f_levels.empty() ||
        driver_counts.empty() || nic_options.empty()) {
        throw DomainError("control grid axes must be non-empty");
    }
    if (!strictly_increasing(zeta_levels) || !strictly_increasing(sigma_options) ||
        !strictly_increasing(container_counts) || !strictly_increasing(f_levels) ||
        !strictly_increasing(driver_counts) || !strictly_increasing(nic_options)) {
        throw DomainError("control grid axes must be strictly increasing");
    }
    if (!(zeta_levels.front() > 0.0 && zeta_levels.back() <= 1.0)) throw DomainError("zeta levels must lie in (0,1]");
    if (!is_binary(sigma_options) || !is_binary(nic_options)) throw DomainError("sigma and nic options are binary");
    if (container_counts.front() < cp.min_containers || container_counts.back() > cp.max_containers) {
        throw DomainError("container counts outside [min_containers, max_containers]");
    }
    for (double f : f_levels) {
        if (std::find(cp.f_levels.begin(), cp.f_levels.end(), f) == cp.f_levels.end()) {
            throw DomainError("grid rate " + std::to_string(f) + " is not a platform level");
        }
    }
    if (driver_counts.front() < 0 || driver_counts.back() > cp.max_drivers) {
        throw DomainError("driver counts outside [0, max_drivers]");
    }
}

double ControllerContext::delay_bound_s() const {
    return delay_bound(compute.input_buffer_bits, compute.output_buffer_bits, compute.min_link_rate_bps);
}

ControlShape shape_of(const ControlInput& c) {
    ControlShape s;
    s.zeta = c.zeta;
    s.sigma = c.sigma;
    s.containers = c.containers;
    s.f = c.f.empty() ? 0.0 : c.f.front();
    s.drivers = c.drivers;
    s.nic = c.nic;
    return s;
}

std::vector<double> allocate_tasks(double gamma_star, int count, double cap) {
    if (gamma_star < 0.0 || count < 0) throw DomainError("allocation needs gamma_star >= 0 and count >= 0");
    if (count == 0) {
        if (gamma_star > 0.0) throw InfeasibleControl("no container to take the admitted load");
        return {};
    }
    if (gamma_star > static_cast<double>(count) * cap) {
        throw InfeasibleControl("admitted load exceeds the per-container cap times the container count");
    }
    const double n = static_cast<double>(count);
    const double base = std::floor(gamma_star / n);
    const double rem = gamma_star - base * n;
    std::vector<double> out(static_cast<std::size_t>(count), base);
    for (std::size_t c = 0; c < out.size() && static_cast<double>(c) < rem; ++c) out[c] += 1.0;
    for (double g : out) {
        if (g > cap) throw InfeasibleControl("per-container share exceeds its cap");
    }
    return out;
}

Admission plan_admission(int sigma, const SiteState& state, double load_a, double load_b,
                         const ControllerContext& ctx, double extra_cap) {
    if (sigma == 0) return {};
    double cap = std::max(ctx.capacity_bits() - state.q_in_bits, 0.0);
    if (extra_cap >= 0.0) cap = std::min(cap, extra_cap);
    return admit(load_a, load_b, ctx.sensitive_fraction, cap);
}

double shape_capacity_bits(const ControlShape& shape, const ComputeParams& cp) {
    return static_cast<double>(shape.containers) * std::min(cp.max_task_bits, cp.processing_bits(shape.f));
}

double processed_bits(const ControlInput& control, const SiteState& state, const ComputeParams& cp) {
    return std::min(state.q_in_bits + control.gamma_star(), processing_capacity(control.f, cp));
}

QueueLevels next_queues(const ControlInput& control, const SiteState& state, const ComputeParams& cp) {
    return queue_step(state.q_in_bits, state.q_out_bits, control.gamma_star(), processed_bits(control, state, cp),
                      control.dequeued(), QueueCaps{cp.input_buffer_bits, cp.output_buffer_bits});
}

double served_load(const ControlInput& control, double load_a, double load_b) {
    return control.sigma != 0 ? load_a + load_b : 0.0;
}

std::optional<ControlInput> build_control(const ControlShape& shape, const SiteState& state, double gamma_star,
                                          const ControllerContext& ctx) {
    const ComputeParams& cp = ctx.compute;
    if (shape.containers < cp.min_containers || shape.containers > cp.max_containers) return std::nullopt;
    if (shape.drivers < 0 || shape.drivers > cp.max_drivers) return std::nullopt;
    if (shape.sigma == 0 && gamma_star > 0.0) return std::nullopt;

    ControlInput c;
    c.zeta = shape.zeta;
    c.sigma = shape.sigma;
    c.containers = shape.containers;
    c.drivers = shape.drivers;
    c.nic = shape.nic;
    c.f.assign(static_cast<std::size_t>(shape.containers), shape.f);

    // Admitted tasks must fit the task cap and be processed within the slot.
    const double per_container = std::min(cp.max_task_bits, cp.processing_bits(shape.f));
    if (gamma_star > static_cast<double>(shape.containers) * per_container) return std::nullopt;
    c.gamma = allocate_tasks(gamma_star, shape.containers, per_container);

    double total_rate = 0.0;
    c.rate.reserve(c.gamma.size());
    for (double g : c.gamma) {
        c.rate.push_back(link_rate(g, cp));
        total_rate += c.rate.back();
    }
    if (total_rate > cp.max_link_rate_bps) return std::nullopt;

    const double processed = std::min(state.q_in_bits + gamma_star, processing_capacity(c.f, cp));
    const double pending = state.q_out_bits + processed;
    if (pending > 0.0) {
        if (shape.drivers == 0) return std::nullopt;
        const double per_driver = ctx.radio.target_rate_bps * (cp.slot_s - cp.max_processing_s);
        if (pending > static_cast<double>(shape.drivers) * per_driver) return std::nullopt;
        c.dequeue = allocate_tasks(pending, shape.drivers, per_driver);
    } else {
        c.dequeue.assign(static_cast<std::size_t>(shape.drivers), 0.0);
    }
    if ((gamma_star > 0.0 || pending > 0.0) && shape.nic == 0) return std::nullopt;

    if (slot_delay(c, cp) > cp.max_delay_s) return std::nullopt;
    const double q_in_after = state.q_in_bits + gamma_star - processed;
    if (q_in_after > cp.input_buffer_bits) return std::nullopt;
    if (path_delay(q_in_after, 0.0, c, cp, ctx.radio.target_rate_bps) > ctx.delay_bound_s()) return std::nullopt;
    return c;
}

std::vector<ControlInput> enumerate_controls(const SiteState& state, const ControlGrid& grid,
                                             const SlotForecast& forecast, const ControllerContext& ctx) {
    std::vector<ControlInput> out;
    const double admitted[2] = {
        plan_admission(0, state, forecast.load_a, forecast.load_b, ctx).gamma_star,
        plan_admission(1, state, forecast.load_a, forecast.load_b, ctx).gamma_star,
    };
    for (double zeta : grid.zeta_levels) {
        for (int sigma : grid.sigma_options) {
            for (int containers : grid.container_counts) {
                for (double f : grid.f_levels) {
                    for (int drivers : grid.driver_counts) {
                        for (int nic : grid.nic_options) {
                            const ControlShape shape{zeta, sigma, containers, f, drivers, nic};
                            if (auto c = build_control(shape, state, admitted[sigma], ctx)) {
                                out.push_back(std::move(*c));
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

double cost_from_energy(double theta_site_j, double gamma_star, const SlotForecast& forecast,
                        const ControllerContext& ctx) {
    const double cap = ctx.capacity_bits();
    const double reference =
        ctx.f2_reference == F2Reference::capacity
            ? cap
            : std::floor(ctx.sensitive_fraction * forecast.load_a) + std::floor(ctx.sensitive_fraction * forecast.load_b);
    const double gap = (gamma_star - reference) / cap;
    const double upsilon = ctx.weights.upsilon;
    return upsilon * (theta_site_j / ctx.baseline_j) + (1.0 - upsilon) * (gap * gap);
}

double cost_J(const SiteState& state, const ControlInput& control, const SlotForecast& forecast,
              const ControllerContext& ctx) {
    const double served = served_load(control, forecast.load_a, forecast.load_b);
    const double theta = site_energy(control, state, served, ctx.radio, ctx.compute).site;
    return cost_from_energy(theta, control.gamma_star(), forecast, ctx);
}

bool energy_admissible(double energy_j, double next_energy_j, const BatteryParams& battery, EnergyRule rule) {
    if (rule == EnergyRule::budget_only) return true;
    return next_energy_j >= std::min(battery.e_low_j, energy_j);
}

std::optional<SiteState> transition(const SiteState& state, const ControlInput& control,
                                     const SlotForecast& forecast, const ControllerContext& ctx, EnergyRule rule) {
    const double served = served_load(control, forecast.load_a, forecast.load_b);
    const double theta = site_energy(control, state, served, ctx.radio, ctx.compute).site;
    if (theta > state.energy_j) return std::nullopt;
    const double next_energy = step(state.energy_j, forecast.harvest_j, theta, ctx.battery);
    if (!energy_admissible(state.energy_j, next_energy, ctx.battery, rule)) return std::nullopt;

    SiteState next;
    next.zeta = control.zeta;
    next.sigma = control.sigma;
    next.containers = control.containers;
    next.drivers = control.drivers;
    next.energy_j = next_energy;
    const QueueLevels q = next_queues(control, state, ctx.compute);
    next.q_in_bits = q.q_in;
    next.q_out_bits = q.q_out;
    next.f_prev = control.f;
    return next;
}

double max_capacity_energy(const ControllerContext& ctx) {
    const ComputeParams& cp = ctx.compute;
    const ControlShape shape{1.0, 1, cp.max_containers, cp.f_max(), cp.max_drivers, 1};
    SiteState state;
    state.f_prev.assign(static_cast<std::size_t>(cp.max_containers), cp.f_max());
    const double gamma_star = std::floor(ctx.capacity_bits());
    const auto control = build_control(shape, state, gamma_star, ctx);
    if (!control) throw InfeasibleControl("the maximum-capacity control is infeasible at design load");
    const double served = gamma_star / ctx.sensitive_fraction;
    return site_energy(*control, state, served, ctx.radio, cp).site;
}

ControlInput emergency_control(const ControlGrid& grid, const ComputeParams& cp) {
    ControlInput c;
    c.zeta = grid.zeta_levels.front();
    c.sigma = 0;
    c.containers = cp.min_containers;
    c.f.assign(static_cast<std::size_t>(cp.min_containers), 0.0);
    c.gamma.assign(c.f.size(), 0.0);
    c.rate.assign(c.f.size(), link_rate(0.0, cp));
    c.nic = 0;
    c.drivers = 0;
    return c;
}

std::size_t grid_index(const ControlShape& shape, const ControlGrid& grid) {
    std::size_t idx = index_in(grid.zeta_levels, shape.zeta, "zeta");
    idx = idx * grid.sigma_options.size() + index_in(grid.sigma_options, shape.sigma, "sigma");
    idx = idx * grid.container_counts.size() + index_in(grid.container_counts, shape.containers, "containers");
    idx = idx * grid.f_levels.size() + index_in(grid.f_levels, shape.f, "f");
    idx = idx * grid.driver_counts.size() + index_in(grid.driver_counts, shape.drivers, "drivers");
    idx = idx * grid.nic_options.size() + index_in(grid.nic_options, shape.nic, "nic");
    return idx;
}

Decision rrm(const SiteState& state, const SlotForecast& forecast, const ControlGrid& grid,
             const ControllerContext& ctx, double reservation_fraction) {
    if (!(reservation_fraction > 0.0 && reservation_fraction <= 1.0)) {
        throw DomainError("reservation fraction must lie in (0,1]");
    }
    const ComputeParams& cp = ctx.compute;
    // Guards against 0.6 * 20 landing a hair above 12.
    const auto reserve = [reservation_fraction](int n) {
        return static_cast<int>(std::ceil(reservation_fraction * n - 1e-9));
    };
    ControlShape shape;
    shape.sigma = 1;
    shape.zeta = reservation_fraction;
    shape.containers = std::clamp(reserve(cp.max_containers), cp.min_containers, cp.max_containers);
    shape.drivers = std::clamp(reserve(cp.max_drivers), 0, cp.max_drivers);
    shape.nic = 1;
    const double target = reservation_fraction * cp.f_max();
    shape.f = cp.f_levels.front();
    for (double level : cp.f_levels) {
        if (std::abs(level - target) < std::abs(shape.f - target)) shape.f = level;
    }

    Decision d;
    d.depth = 1;
    const Admission adm =
        plan_admission(1, state, forecast.load_a, forecast.load_b, ctx, shape_capacity_bits(shape, cp));
    auto control = build_control(shape, state, adm.gamma_star, ctx);
    if (control) {
        const double served = served_load(*control, forecast.load_a, forecast.load_b);
        const double theta = site_energy(*control, state, served, ctx.radio, cp).site;
        if (theta <= state.energy_j) {
            d.control = std::move(*control);
            d.expected_cost = cost_from_energy(theta, d.control.gamma_star(), forecast, ctx);
            return d;
        }
    }
    d.control = emergency_control(grid, cp);
    d.emergency = true;
    return d;
}

} // namespace rrsite
