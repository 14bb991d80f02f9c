#include "rrsite/simulator.hpp"

#include "rrsite/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rrsite {

std::string to_string(ControllerKind kind) {
    switch (kind) {
    case ControllerKind::drc_rs: return "drc_rs";
    case ControllerKind::rrm: return "rrm";
    case ControllerKind::oracle: return "oracle";
    }
    return "unknown";
}

ControllerKind controller_kind_from_string(const std::string& name) {
    if (name == "drc_rs") return ControllerKind::drc_rs;
    if (name == "rrm") return ControllerKind::rrm;
    if (name == "oracle") return ControllerKind::oracle;
    throw DomainError("unknown controller '" + name + "'");
}

TraceSet synth_traces(std::size_t n_slots, std::uint64_t seed, const SynthOptions& options) {
    TraceSet set;
    set.traffic_a = normalize(synth_trace(SynthProfile::diurnal_traffic, n_slots, seed, options));
    set.traffic_a.label = SeriesLabel::traffic_a;
    SynthOptions shifted = options;
    shifted.phase_shift_h += 2.0;
    set.traffic_b = normalize(synth_trace(SynthProfile::diurnal_traffic, n_slots, seed + 1, shifted));
    set.traffic_b.label = SeriesLabel::traffic_b;
    set.solar = synth_trace(SynthProfile::solar, n_slots, seed + 2, options);
    set.wind = synth_trace(SynthProfile::wind, n_slots, seed + 3, options);
    return set;
}

void Scenario::validate() const {
    radio.validate();
    compute.validate();
    battery.validate();
    weights.validate();
    effective_grid().validate(compute);
    if (!(sensitive_fraction > 0.0 && sensitive_fraction <= 1.0)) {
        throw DomainError("sensitive fraction must lie in (0,1]");
    }
    if (!(reservation_fraction > 0.0 && reservation_fraction <= 1.0)) {
        throw DomainError("reservation fraction must lie in (0,1]");
    }
    if (horizon == 0) throw DomainError("lookahead horizon must be >= 1");
    if (n_users < 0) throw DomainError("user count must be >= 0");
    if (per_user_bits < 0.0) throw DomainError("per-user demand must be >= 0");
    if (n_slots == 0) throw DomainError("n_slots must be >= 1");
    const TraceSeries* series[] = {&traces.traffic_a, &traces.traffic_b, &traces.solar, &traces.wind};
    for (const TraceSeries* s : series) {
        if (s->slot_s != compute.slot_s) throw ResolutionMismatch("trace resolution differs from the slot length");
        if (s->size() < warmup_slots + n_slots) {
            throw NotEnoughData("trace " + std::string(to_string(s->label)) + " has " + std::to_string(s->size()) +
                                " slots, need warm-up plus n_slots = " + std::to_string(warmup_slots + n_slots));
        }
        if (s->has_gaps()) throw DomainError("trace " + std::string(to_string(s->label)) + " contains gaps");
    }
}

ControlGrid Scenario::effective_grid() const { return grid ? *grid : ControlGrid::full(compute); }

ControllerContext make_context(const Scenario& scenario) {
    ControllerContext ctx;
    ctx.radio = scenario.radio;
    ctx.compute = scenario.compute;
    ctx.battery = scenario.battery;
    ctx.weights = scenario.weights;
    ctx.f2_reference = scenario.f2_reference;
    ctx.sensitive_fraction = scenario.sensitive_fraction;
    ctx.baseline_j = max_capacity_energy(ctx);
    return ctx;
}

double baseline_energy(const Scenario& scenario) { return make_context(scenario).baseline_j; }

namespace {

struct Realized {
    ControlInput control;
    double served = 0.0;
    EnergyBreakdown energy;
};

// Applies the committed decision to the observed loads. Admission is capped by
// what the chosen containers can process; the NIC and one driver are switched
// on when data moves, and further drivers are added while the dequeue or the
// path delay does not fit.
std::optional<Realized> realize(ControlShape shape, const SiteState& state, double load_a, double load_b,
                                const ControllerContext& ctx) {
    const ComputeParams& cp = ctx.compute;
    const Admission adm = plan_admission(shape.sigma, state, load_a, load_b, ctx, shape_capacity_bits(shape, cp));
    const std::vector<double> f(static_cast<std::size_t>(shape.containers), shape.f);
    const double processed = std::min(state.q_in_bits + adm.gamma_star, processing_capacity(f, cp));
    const double pending = state.q_out_bits + processed;
    if (adm.gamma_star > 0.0 || pending > 0.0) shape.nic = 1;
    if (pending > 0.0) shape.drivers = std::max(shape.drivers, 1);
    for (; shape.drivers <= cp.max_drivers; ++shape.drivers) {
        if (auto c = build_control(shape, state, adm.gamma_star, ctx)) {
            Realized r;
            r.served = served_load(*c, load_a, load_b);
            r.energy = site_energy(*c, state, r.served, ctx.radio, cp);
            r.control = std::move(*c);
            return r;
        }
    }
    return std::nullopt;
}

std::string at_slot(std::size_t t, const std::string& what) {
    return "slot " + std::to_string(t) + ": " + what;
}

class Runner {
public:
    explicit Runner(const Scenario& s)
        : scn_(s), ctx_(make_context(s)), grid_(s.effective_grid()), scale_(0.5 * s.n_users * s.per_user_bits) {
        PredictorConfig pc = s.predictor;
        pc.train_fraction = 1.0; // every warm-up slot is history
        const auto warm = [&](const TraceSeries& series) {
            return fit(std::span<const double>(series.values).first(s.warmup_slots), pc);
        };
        pred_a_ = warm(s.traces.traffic_a);
        pred_b_ = warm(s.traces.traffic_b);
        pred_solar_ = warm(s.traces.solar);
        pred_wind_ = warm(s.traces.wind);
        const auto& sv = s.traces.solar.values;
        const double solar_peak = *std::max_element(sv.begin(), sv.begin() + static_cast<std::ptrdiff_t>(s.warmup_slots));
        offpeak_threshold_ = s.battery.offpeak_fraction * solar_peak;
    }

    SimReport run(const RecordSink& sink, bool keep_records) {
        SimReport report;
        SimSummary& sum = report.summary;
        sum.controller = scn_.controller;
        sum.n_users = scn_.n_users;
        sum.n_slots = scn_.n_slots;
        sum.baseline_j = ctx_.baseline_j;
        sum.delay_bound_s = ctx_.delay_bound_s();

        SiteState state;
        state.energy_j = scn_.battery.e_init_j;
        state.containers = scn_.compute.min_containers;
        sum.min_energy_j = sum.max_energy_j = state.energy_j;

        EnergyBreakdown total;
        double cost_total = 0.0;
        if (keep_records) report.records.reserve(scn_.n_slots);
        for (std::size_t t = 0; t < scn_.n_slots; ++t) {
            SlotRecord rec;
            try {
                rec = step_slot(t, state, sum);
            } catch (const InvariantViolation& e) {
                if (scn_.on_violation == ViolationPolicy::abort) throw InvariantViolation(at_slot(t, e.what()));
                ++sum.violations;
                continue;
            } catch (const EnergyViolation& e) {
                if (scn_.on_violation == ViolationPolicy::abort) throw EnergyViolation(at_slot(t, e.what()));
                ++sum.violations;
                continue;
            }
            total = make_breakdown(total.comm + rec.energy.comm, total.cp + rec.energy.cp, total.sw + rec.energy.sw,
                                   total.of + rec.energy.of, total.lk + rec.energy.lk, total.ls + rec.energy.ls,
                                   total.ch + rec.energy.ch);
            cost_total += rec.cost;
            sum.emergencies += rec.emergency ? 1 : 0;
            sum.relaxed_slots += rec.relaxed ? 1 : 0;
            sum.shed_slots += rec.shed ? 1 : 0;
            sum.sleep_slots += rec.control.sigma == 0 ? 1 : 0;
            sum.max_slot_delay_s = std::max(sum.max_slot_delay_s, rec.slot_delay_s);
            sum.max_path_delay_s = std::max(sum.max_path_delay_s, rec.path_delay_s);
            sum.min_energy_j = std::min(sum.min_energy_j, rec.energy_next_j);
            sum.max_energy_j = std::max(sum.max_energy_j, rec.energy_next_j);
            if (sink) sink(rec);
            if (keep_records) report.records.push_back(std::move(rec));
        }
        const double n = static_cast<double>(scn_.n_slots);
        sum.mean_energy = make_breakdown(total.comm / n, total.cp / n, total.sw / n, total.of / n, total.lk / n,
                                         total.ls / n, total.ch / n);
        sum.mean_site_j = total.site / n;
        sum.savings_pct = 100.0 * (1.0 - sum.mean_site_j / sum.baseline_j);
        sum.mean_cost = cost_total / n;
        sum.final_energy_j = state.energy_j;
        return report;
    }

private:
    const Scenario& scn_;
    ControllerContext ctx_;
    ControlGrid grid_;
    double scale_;
    Predictor pred_a_;
    Predictor pred_b_;
    Predictor pred_solar_;
    Predictor pred_wind_;
    double offpeak_threshold_ = 0.0;

    static std::vector<double> forecast(const Predictor& p, const TraceSeries& s, std::size_t now, std::size_t h) {
        return predict(p, std::span<const double>(s.values).first(now), h).predicted;
    }

    SlotRecord step_slot(std::size_t t, SiteState& state, const SimSummary&) {
        const std::size_t now = scn_.warmup_slots + t;
        const std::size_t h = scn_.controller == ControllerKind::rrm ? 1 : scn_.horizon;
        const auto fa = forecast(pred_a_, scn_.traces.traffic_a, now, h);
        const auto fb = forecast(pred_b_, scn_.traces.traffic_b, now, h);
        const auto fs = forecast(pred_solar_, scn_.traces.solar, now, h);
        const auto fw = forecast(pred_wind_, scn_.traces.wind, now, h);
        std::vector<SlotForecast> fc(h);
        for (std::size_t k = 0; k < h; ++k) {
            fc[k].load_a = std::floor(fa[k] * scale_);
            fc[k].load_b = std::floor(fb[k] * scale_);
            // The source is fixed from the current buffer level for the whole horizon.
            fc[k].harvest_j = select_source(fs[k], fw[k], state.energy_j, scn_.battery, offpeak_threshold_).selected_j;
        }

        Decision d;
        switch (scn_.controller) {
        case ControllerKind::drc_rs: d = drc_rs(state, fc, grid_, ctx_); break;
        case ControllerKind::oracle: d = oracle_search(state, fc, grid_, ctx_); break;
        case ControllerKind::rrm: d = rrm(state, fc[0], grid_, ctx_, scn_.reservation_fraction); break;
        }

        SlotRecord rec;
        rec.slot = t;
        rec.energy_j = state.energy_j;
        rec.energy_class = classify(state.energy_j, scn_.battery);
        rec.load_a_bits = std::floor(scn_.traces.traffic_a.values[now] * scale_);
        rec.load_b_bits = std::floor(scn_.traces.traffic_b.values[now] * scale_);
        rec.expected_cost = d.expected_cost;
        rec.depth = d.depth;
        rec.emergency = d.emergency;
        rec.relaxed = d.relaxed;

        ControlShape shape = shape_of(d.control);
        auto real = realize(shape, state, rec.load_a_bits, rec.load_b_bits, ctx_);
        if (real && real->energy.site > state.energy_j && shape.sigma == 1) {
            shape.sigma = 0;
            real = realize(shape, state, rec.load_a_bits, rec.load_b_bits, ctx_);
            rec.shed = true;
        }
        if (!real) throw InvariantViolation("committed control has no feasible realization");
        const ControlInput& c = real->control;
        rec.control = c;
        rec.energy = real->energy;

        rec.harvest = select_source(scn_.traces.solar.values[now], scn_.traces.wind.values[now], state.energy_j,
                                    scn_.battery, offpeak_threshold_, fs[0]);
        const double theta = rec.energy.site;
        const double next_energy = step(state.energy_j, rec.harvest.selected_j, theta, scn_.battery);

        // Ledger closes exactly up to the cap and the floor.
        const double expected =
            std::max(std::min(state.energy_j + rec.harvest.selected_j - theta - scn_.battery.leakage_j,
                              scn_.battery.e_max_j),
                     0.0);
        if (std::abs(next_energy - expected) > 1e-9 * std::max(1.0, std::abs(expected)) || next_energy < 0.0 ||
            next_energy > scn_.battery.e_max_j) {
            throw InvariantViolation("battery ledger does not close");
        }

        const QueueLevels q = next_queues(c, state, scn_.compute);
        rec.q_in_bits = q.q_in;
        rec.q_out_bits = q.q_out;
        rec.slot_delay_s = slot_delay(c, scn_.compute);
        rec.path_delay_s = path_delay(q.q_in, q.q_out, c, scn_.compute, scn_.radio.target_rate_bps);
        if (rec.slot_delay_s > scn_.compute.max_delay_s) throw InvariantViolation("slot delay above tau_max");
        if (rec.path_delay_s > ctx_.delay_bound_s()) throw InvariantViolation("path delay above the hard bound");

        rec.cost = cost_from_energy(theta, c.gamma_star(), SlotForecast{rec.load_a_bits, rec.load_b_bits, 0.0}, ctx_);
        rec.energy_next_j = next_energy;

        state.zeta = c.zeta;
        state.sigma = c.sigma;
        state.containers = c.containers;
        state.drivers = c.drivers;
        state.energy_j = next_energy;
        state.q_in_bits = q.q_in;
        state.q_out_bits = q.q_out;
        state.f_prev = c.f;
        return rec;
    }
};

} // namespace

SimReport run(const Scenario& scenario, const RecordSink& sink, bool keep_records) {
    scenario.validate();
    const FeasibilityReport feas = check_feasibility(scenario.compute, scenario.compute.input_buffer_bits);
    if (!feas.feasible) throw InfeasibleConfig("platform infeasible: " + feas.detail);
    Runner runner(scenario);
    return runner.run(sink, keep_records);
}

std::vector<SavingsPoint> savings_curve(const Scenario& scenario, const std::vector<int>& user_counts) {
    std::vector<SavingsPoint> out;
    out.reserve(user_counts.size());
    for (int n : user_counts) {
        Scenario s = scenario;
        s.n_users = n;
        SavingsPoint p;
        p.n_users = n;
        s.controller = ControllerKind::drc_rs;
        p.drc_rs_pct = run(s, {}, false).summary.savings_pct;
        s.controller = ControllerKind::rrm;
        p.rrm_pct = run(s, {}, false).summary.savings_pct;
        out.push_back(p);
    }
    return out;
}

} // namespace rrsite
