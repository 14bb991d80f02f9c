#include "rrsite/controller.hpp"

#include "rrsite/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>

// Breadth-first lookahead over a reduced control set.
//
// Controls are grouped into classes (sigma, containers, f). Inside a class the
// remaining axes only change the energy of the current slot: zeta through the
// radio load term, nic through the offload term, drivers not at all (the
// optical term depends on the total dequeued bits). The minimum-energy member
// of a class therefore yields the lowest cost and the highest next battery
// level, and future feasibility is monotone in the battery level. At the first
// depth every member is scored so the first-control tie-break sees the exact
// site energy of each candidate.
//
// Nodes that share (containers, f, q_in, q_out) reach identical futures up to
// the battery level. A node is dropped when another has at least its energy,
// at most its cost and a first control ranked no worse, or a cost lower by more
// than the rounding that the remaining additions can absorb.

namespace rrsite {

namespace {

struct ClassEval {
    bool feasible = false;
    int sigma = 0;
    std::size_t c_idx = 0;
    std::size_t f_idx = 0;
    double gamma_star = 0.0;
    double comm = 0.0; // at the cheapest zeta
    double cp = 0.0;
    double of = 0.0;   // at the cheapest feasible nic
    double lk = 0.0;
    double ls = 0.0;
    double q_in_after = 0.0;
    double q_out_after = 0.0;
    ControlInput control;  // smallest feasible driver count, first zeta, first feasible nic
    std::vector<int> nics; // feasible nic options, grid order
};

struct Table {
    double q_in = 0.0;
    double q_out = 0.0;
    std::vector<ClassEval> classes;
    std::vector<double> comm_by_zeta[2]; // indexed [sigma][zeta index]
};

struct Node {
    std::size_t c_idx = 0;
    std::size_t f_idx = 0;
    double energy = 0.0;
    double q_in = 0.0;
    double q_out = 0.0;
    double cost = 0.0;
    RootRank rank;
    std::uint32_t root = 0;
    bool alive = true;
};

double ulp(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()) - x; }

// Pareto sets of nodes, one per (containers, f, q_in, q_out). Insertion
// drops whatever the new node dominates and ignores the node when it is
// dominated itself.
class Frontier {
public:
    Frontier(std::size_t n_cf, std::size_t n_f, double margin) : n_f_(n_f), margin_(margin), by_cf_(n_cf, npos) {}

    void insert(const Node& n) {
        Bucket& b = bucket_for(n);
        for (std::size_t j : b.members) {
            if (dominates(nodes_[j], n)) return;
        }
        std::erase_if(b.members, [&](std::size_t j) {
            if (!dominates(n, nodes_[j])) return false;
            nodes_[j].alive = false;
            return true;
        });
        b.members.push_back(nodes_.size());
        nodes_.push_back(n);
    }

    // Survivors in insertion order.
    std::vector<Node> take() {
        std::erase_if(nodes_, [](const Node& n) { return !n.alive; });
        return std::move(nodes_);
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    struct Bucket {
        std::size_t c_idx;
        std::size_t f_idx;
        double q_in;
        double q_out;
        std::vector<std::size_t> members;
    };

    std::size_t n_f_;
    double margin_;
    std::vector<std::size_t> by_cf_; // buckets with empty queues, the common case
    std::vector<Bucket> buckets_;
    std::vector<Node> nodes_;

    bool dominates(const Node& a, const Node& b) const {
        if (a.energy < b.energy) return false;
        if (a.cost <= b.cost && a.rank <= b.rank) return true;
        return b.cost - a.cost > margin_;
    }

    Bucket& bucket_for(const Node& n) {
        if (n.q_in == 0.0 && n.q_out == 0.0) {
            std::size_t& slot = by_cf_[n.c_idx * n_f_ + n.f_idx];
            if (slot == npos) {
                slot = buckets_.size();
                buckets_.push_back({n.c_idx, n.f_idx, 0.0, 0.0, {}});
            }
            return buckets_[slot];
        }
        for (Bucket& b : buckets_) {
            if (b.c_idx == n.c_idx && b.f_idx == n.f_idx && b.q_in == n.q_in && b.q_out == n.q_out) return b;
        }
        buckets_.push_back({n.c_idx, n.f_idx, n.q_in, n.q_out, {}});
        return buckets_.back();
    }
};

class Lookahead {
public:
    Lookahead(const SiteState& state, const std::vector<SlotForecast>& forecasts, const ControlGrid& grid,
              const ControllerContext& ctx)
        : state_(state), fc_(forecasts), grid_(grid), ctx_(ctx), n_c_(grid.container_counts.size()),
          n_f_(grid.f_levels.size()), tables_(forecasts.size()),
          sw_cache_(n_c_ * n_f_ * n_c_ * n_f_, std::numeric_limits<double>::quiet_NaN()) {
        cost_bound_ = 0.0;
        for (const SlotForecast& f : fc_) cost_bound_ += cost_upper_bound(f);
        cost_bound_ *= 2.0;
    }

    Decision run(EnergyRule rule) {
        roots_.clear();
        std::vector<Node> frontier = expand_root(rule);
        const std::size_t horizon = fc_.size();
        std::size_t depth = 1;
        while (!frontier.empty() && depth < horizon) {
            std::vector<Node> next = expand(frontier, depth, rule);
            if (next.empty()) break;
            frontier = std::move(next);
            ++depth;
        }
        Decision d;
        const Node* best = nullptr;
        for (const Node& n : frontier) {
            if (!n.alive) continue;
            if (best == nullptr || n.cost < best->cost || (n.cost == best->cost && n.rank < best->rank)) best = &n;
        }
        if (best == nullptr) {
            d.emergency = true;
            return d;
        }
        d.control = roots_[best->root];
        d.expected_cost = best->cost;
        d.depth = static_cast<int>(depth);
        d.relaxed = rule == EnergyRule::budget_only;
        return d;
    }

private:
    const SiteState& state_;
    const std::vector<SlotForecast>& fc_;
    const ControlGrid& grid_;
    const ControllerContext& ctx_;
    std::size_t n_c_;
    std::size_t n_f_;
    std::vector<std::deque<Table>> tables_;
    std::vector<double> sw_cache_;
    std::vector<ControlInput> roots_;
    double cost_bound_ = 0.0;

    std::size_t class_id(int sigma_idx, std::size_t c_idx, std::size_t f_idx) const {
        return (static_cast<std::size_t>(sigma_idx) * n_c_ + c_idx) * n_f_ + f_idx;
    }

    // Generous bound on the cost of one slot, used only to size the rounding
    // margin of the dominance test.
    double cost_upper_bound(const SlotForecast& f) const {
        const RadioParams& radio = ctx_.radio;
        const ComputeParams& cp = ctx_.compute;
        double f_top = cp.f_max();
        for (double v : state_.f_prev) f_top = std::max(f_top, v);
        const double n_top = std::max(static_cast<double>(cp.max_containers), static_cast<double>(state_.f_prev.size()));
        const double lk_coef = 2.0 * cp.link_power_w / (cp.slot_s - cp.max_processing_s);
        const double theta = radio.bs_power_w * cp.slot_s +
                             load_power(f.load_a + f.load_b, grid_.zeta_levels.front(), radio) +
                             radio.backhaul_power_w * cp.slot_s + radio.data_j_per_byte * ctx_.capacity_bits() / 8.0 +
                             cp.max_containers * cp.container_max_j + cp.switch_cost * n_top * f_top * f_top +
                             cp.nic_idle_j + cp.nic_max_j +
                             cp.max_containers * lk_coef * std::pow(cp.link_rtt_s * cp.max_task_bits, 2) +
                             cp.driver_j_per_s * (cp.input_buffer_bits + cp.output_buffer_bits +
                                                  state_.q_in_bits + state_.q_out_bits) /
                                 radio.target_rate_bps +
                             cache_energy(cp.cache_lambda, cp.cache_tr_j, cp.cache_j);
        const double cap = ctx_.capacity_bits();
        const double reference = std::max(ctx_.sensitive_fraction * (f.load_a + f.load_b), cap);
        const double gap = reference / cap;
        return theta / ctx_.baseline_j + gap * gap;
    }

    double margin(std::size_t remaining) const {
        return 2.0 * static_cast<double>(remaining) * ulp(cost_bound_);
    }

    const Table& table(std::size_t k, double q_in, double q_out) {
        for (const Table& t : tables_[k]) {
            if (t.q_in == q_in && t.q_out == q_out) return t;
        }
        tables_[k].push_back(build_table(k, q_in, q_out));
        return tables_[k].back();
    }

    Table build_table(std::size_t k, double q_in, double q_out) const {
        const SlotForecast& f = fc_[k];
        const RadioParams& radio = ctx_.radio;
        const ComputeParams& cp = ctx_.compute;
        Table t;
        t.q_in = q_in;
        t.q_out = q_out;
        SiteState stub;
        stub.q_in_bits = q_in;
        stub.q_out_bits = q_out;

        double admitted[2] = {0.0, 0.0};
        for (int sigma : grid_.sigma_options) {
            admitted[sigma] = plan_admission(sigma, stub, f.load_a, f.load_b, ctx_).gamma_star;
            const double served = sigma != 0 ? f.load_a + f.load_b : 0.0;
            for (double zeta : grid_.zeta_levels) {
                t.comm_by_zeta[sigma].push_back(comm_energy(sigma, zeta, served, admitted[sigma], radio, cp.slot_s));
            }
        }

        t.classes.resize(grid_.sigma_options.size() * n_c_ * n_f_);
        for (std::size_t si = 0; si < grid_.sigma_options.size(); ++si) {
            const int sigma = grid_.sigma_options[si];
            // Cheapest zeta; comm is monotone in the load term, ties keep the lowest zeta.
            std::size_t z_best = 0;
            for (std::size_t z = 1; z < grid_.zeta_levels.size(); ++z) {
                if (t.comm_by_zeta[sigma][z] < t.comm_by_zeta[sigma][z_best]) z_best = z;
            }
            for (std::size_t ci = 0; ci < n_c_; ++ci) {
                for (std::size_t fi = 0; fi < n_f_; ++fi) {
                    ClassEval& e = t.classes[class_id(static_cast<int>(si), ci, fi)];
                    e.sigma = sigma;
                    e.c_idx = ci;
                    e.f_idx = fi;
                    e.gamma_star = admitted[sigma];
                    for (int drivers : grid_.driver_counts) {
                        for (int nic : grid_.nic_options) {
                            const ControlShape shape{grid_.zeta_levels.front(), sigma, grid_.container_counts[ci],
                                                     grid_.f_levels[fi], drivers, nic};
                            auto c = build_control(shape, stub, e.gamma_star, ctx_);
                            if (!c) continue;
                            if (!e.feasible) {
                                e.feasible = true;
                                e.control = std::move(*c);
                            }
                            e.nics.push_back(nic);
                        }
                        if (e.feasible) break;
                    }
                    if (!e.feasible) continue;
                    e.cp = cp_energy(e.control.f, cp);
                    e.lk = link_energy(e.control.gamma, cp).energy_j;
                    e.ls = laser_energy(e.control.dequeue, cp.driver_j_per_s, radio.target_rate_bps, cp.max_drivers);
                    e.of = std::numeric_limits<double>::infinity();
                    for (int nic : e.nics) e.of = std::min(e.of, offload_energy(nic, cp));
                    e.comm = t.comm_by_zeta[sigma][z_best];
                    const QueueLevels q = next_queues(e.control, stub, cp);
                    e.q_in_after = q.q_in;
                    e.q_out_after = q.q_out;
                }
            }
        }
        return t;
    }

    double sw_between(std::size_t prev_c, std::size_t prev_f, std::size_t c, std::size_t f) {
        double& slot = sw_cache_[((prev_c * n_f_ + prev_f) * n_c_ + c) * n_f_ + f];
        if (std::isnan(slot)) {
            const std::vector<double> before(static_cast<std::size_t>(grid_.container_counts[prev_c]),
                                             grid_.f_levels[prev_f]);
            const std::vector<double> after(static_cast<std::size_t>(grid_.container_counts[c]), grid_.f_levels[f]);
            slot = sw_energy(before, after, ctx_.compute.switch_cost);
        }
        return slot;
    }

    double theta_of(const ClassEval& e, double comm, double sw, double of) const {
        return make_breakdown(comm, e.cp, sw, of, e.lk, e.ls,
                              cache_energy(ctx_.compute.cache_lambda, ctx_.compute.cache_tr_j, ctx_.compute.cache_j))
            .site;
    }

    std::vector<Node> expand_root(EnergyRule rule) {
        const Table& t = table(0, state_.q_in_bits, state_.q_out_bits);
        const SlotForecast& f = fc_[0];
        const ComputeParams& cp = ctx_.compute;
        Frontier out(n_c_ * n_f_, n_f_, margin(fc_.size() - 1));
        for (const ClassEval& e : t.classes) {
            if (!e.feasible) continue;
            const double sw = sw_energy(state_.f_prev, e.control.f, cp.switch_cost);
            // Score every zeta and feasible nic; drivers stay at the smallest count.
            bool have = false;
            RootRank best_rank;
            ControlShape best_shape;
            for (int nic : e.nics) {
                const double of = offload_energy(nic, cp);
                for (std::size_t z = 0; z < grid_.zeta_levels.size(); ++z) {
                    ControlShape shape = shape_of(e.control);
                    shape.zeta = grid_.zeta_levels[z];
                    shape.nic = nic;
                    const RootRank r{theta_of(e, t.comm_by_zeta[e.sigma][z], sw, of), shape.containers,
                                     shape.drivers, shape.zeta, grid_index(shape, grid_)};
                    if (!have || r < best_rank) {
                        have = true;
                        best_rank = r;
                        best_shape = shape;
                    }
                }
            }
            const double theta = best_rank.theta;
            if (theta > state_.energy_j) continue;
            const double next_energy = step(state_.energy_j, f.harvest_j, theta, ctx_.battery);
            if (!energy_admissible(state_.energy_j, next_energy, ctx_.battery, rule)) continue;

            ControlInput root = e.control;
            root.zeta = best_shape.zeta;
            root.nic = best_shape.nic;
            roots_.push_back(std::move(root));

            Node n;
            n.c_idx = e.c_idx;
            n.f_idx = e.f_idx;
            n.energy = next_energy;
            n.q_in = e.q_in_after;
            n.q_out = e.q_out_after;
            n.cost = 0.0 + cost_from_energy(theta, e.gamma_star, f, ctx_);
            n.rank = best_rank;
            n.root = static_cast<std::uint32_t>(roots_.size() - 1);
            out.insert(n);
        }
        return out.take();
    }

    std::vector<Node> expand(const std::vector<Node>& frontier, std::size_t k, EnergyRule rule) {
        const SlotForecast& f = fc_[k];
        const bool last = k + 1 == fc_.size();
        Frontier out(n_c_ * n_f_, n_f_, margin(fc_.size() - (k + 1)));
        Node best;
        bool have_best = false;
        for (const Node& parent : frontier) {
            if (!parent.alive) continue;
            const Table& t = table(k, parent.q_in, parent.q_out);
            for (const ClassEval& e : t.classes) {
                if (!e.feasible) continue;
                const double sw = sw_between(parent.c_idx, parent.f_idx, e.c_idx, e.f_idx);
                const double theta = theta_of(e, e.comm, sw, e.of);
                if (theta > parent.energy) continue;
                const double next_energy = step(parent.energy, f.harvest_j, theta, ctx_.battery);
                if (!energy_admissible(parent.energy, next_energy, ctx_.battery, rule)) continue;
                Node n;
                n.c_idx = e.c_idx;
                n.f_idx = e.f_idx;
                n.energy = next_energy;
                n.q_in = e.q_in_after;
                n.q_out = e.q_out_after;
                n.cost = parent.cost + cost_from_energy(theta, e.gamma_star, f, ctx_);
                n.rank = parent.rank;
                n.root = parent.root;
                if (last) {
                    if (!have_best || n.cost < best.cost || (n.cost == best.cost && n.rank < best.rank)) {
                        best = n;
                        have_best = true;
                    }
                } else {
                    out.insert(n);
                }
            }
        }
        if (last) {
            if (have_best) return {best};
            return {};
        }
        return out.take();
    }
};

} // namespace

Decision drc_rs(const SiteState& state, const std::vector<SlotForecast>& forecasts, const ControlGrid& grid,
                const ControllerContext& ctx) {
    if (forecasts.empty()) throw DomainError("lookahead depth must be >= 1");
    Lookahead search(state, forecasts, grid, ctx);
    Decision strict = search.run(EnergyRule::floor_and_budget);
    if (!strict.emergency && strict.depth == static_cast<int>(forecasts.size())) return strict;
    Decision relaxed = search.run(EnergyRule::budget_only);
    if (!relaxed.emergency) return relaxed;
    relaxed.control = emergency_control(grid, ctx.compute);
    return relaxed;
}

} // namespace rrsite
