#include "rrsite/controller.hpp"

#include "rrsite/errors.hpp"

namespace rrsite {

namespace {

struct Best {
    bool found = false;
    int depth = 0;
    double cost = 0.0;
    RootRank rank;
    ControlInput control;
};

// Deeper first, then cheaper, then the better first control.
bool better(int depth, double cost, const RootRank& rank, const Best& b) {
    if (!b.found) return true;
    if (depth != b.depth) return depth > b.depth;
    if (cost != b.cost) return cost < b.cost;
    return rank < b.rank;
}

struct Search {
    const std::vector<SlotForecast>& forecasts;
    const ControlGrid& grid;
    const ControllerContext& ctx;
    EnergyRule rule;
    Best best;

    void visit(const SiteState& state, std::size_t k, double cost_so_far, const RootRank* rank,
               const ControlInput* root) {
        bool extended = false;
        if (k < forecasts.size()) {
            const SlotForecast& fc = forecasts[k];
            for (const ControlInput& c : enumerate_controls(state, grid, fc, ctx)) {
                const auto next = transition(state, c, fc, ctx, rule);
                if (!next) continue;
                extended = true;
                const double cost = cost_so_far + cost_J(state, c, fc, ctx);
                if (k == 0) {
                    const double served = served_load(c, fc.load_a, fc.load_b);
                    const ControlShape shape = shape_of(c);
                    const RootRank r{site_energy(c, state, served, ctx.radio, ctx.compute).site, c.containers,
                                     c.drivers, c.zeta, grid_index(shape, grid)};
                    visit(*next, k + 1, cost, &r, &c);
                } else {
                    visit(*next, k + 1, cost, rank, root);
                }
            }
        }
        if (!extended && k > 0) {
            const int depth = static_cast<int>(k);
            if (better(depth, cost_so_far, *rank, best)) {
                best.found = true;
                best.depth = depth;
                best.cost = cost_so_far;
                best.rank = *rank;
                best.control = *root;
            }
        }
    }
};

} // namespace

Decision oracle_search(const SiteState& state, const std::vector<SlotForecast>& forecasts, const ControlGrid& grid,
                       const ControllerContext& ctx) {
    if (forecasts.empty()) throw DomainError("lookahead depth must be >= 1");
    Decision d;
    const int horizon = static_cast<int>(forecasts.size());
    for (EnergyRule rule : {EnergyRule::floor_and_budget, EnergyRule::budget_only}) {
        Search s{forecasts, grid, ctx, rule, {}};
        s.visit(state, 0, 0.0, nullptr, nullptr);
        if (!s.best.found) continue;
        if (rule == EnergyRule::floor_and_budget && s.best.depth < horizon) continue;
        d.control = s.best.control;
        d.expected_cost = s.best.cost;
        d.depth = s.best.depth;
        d.relaxed = rule == EnergyRule::budget_only;
        return d;
    }
    d.control = emergency_control(grid, ctx.compute);
    d.emergency = true;
    return d;
}

} // namespace rrsite
