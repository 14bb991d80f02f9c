// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "rrsite/config.hpp"
#include "rrsite/controller.hpp"
#include "rrsite/errors.hpp"
#include "rrsite/report.hpp"
#include "rrsite/simulator.hpp"

#include "energy_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>

#include <sys/wait.h>

using namespace rrsite;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << id << "] " << name << ": " << o.detail << std::endl;
    if (!o.pass) ++failures;
}

template <typename T>
std::vector<T> pick(std::mt19937_64& rng, const std::vector<T>& axis, std::size_t n) {
    std::vector<T> out;
    std::sample(axis.begin(), axis.end(), std::back_inserter(out), n, rng);
    return out; // std::sample keeps the source order
}

ControllerContext default_context() {
    ControllerContext ctx;
    ctx.baseline_j = max_capacity_energy(ctx);
    return ctx;
}

Outcome oracle_equivalence() {
    const ControllerContext ctx = default_context();
    const ComputeParams& cp = ctx.compute;
    const ControlGrid full = ControlGrid::full(cp);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> depth(1, 2);

    const int instances = 150;
    int equal = 0;
    std::size_t largest_grid = 0;
    std::ostringstream first_mismatch;
    const auto t0 = Clock::now();
    for (int i = 0; i < instances; ++i) {
        ControlGrid g;
        g.zeta_levels = pick(rng, full.zeta_levels, 2);
        g.sigma_options = {0, 1};
        g.container_counts = pick(rng, full.container_counts, 3);
        g.f_levels = pick(rng, full.f_levels, 3);
        g.driver_counts = pick(rng, full.driver_counts, 2);
        g.nic_options = {0, 1};
        largest_grid = std::max(largest_grid, g.product_size());

        SiteState s;
        s.energy_j = 0.15e6 + u(rng) * 0.34e6;
        s.q_in_bits = std::floor(u(rng) * u(rng) * 3e7);
        s.q_out_bits = std::floor(u(rng) * u(rng) * 3e7);
        s.containers = g.container_counts[0];
        s.f_prev.assign(static_cast<std::size_t>(s.containers), g.f_levels[rng() % g.f_levels.size()]);
        std::vector<SlotForecast> fc(static_cast<std::size_t>(depth(rng)));
        for (auto& f : fc) f = {std::floor(u(rng) * 4e7), std::floor(u(rng) * 4e7), u(rng) * 4e5};

        const Decision a = drc_rs(s, fc, g, ctx);
        const Decision b = oracle_search(s, fc, g, ctx);
        if (a.expected_cost == b.expected_cost && a.control == b.control && a.depth == b.depth &&
            a.emergency == b.emergency && a.relaxed == b.relaxed) {
            ++equal;
        } else if (first_mismatch.str().empty()) {
            first_mismatch.precision(17);
            first_mismatch << "; first mismatch at instance " << i << " (" << a.expected_cost << " vs "
                           << b.expected_cost << ")";
        }
    }
    const double elapsed = seconds_since(t0);
    std::ostringstream d;
    d << equal << "/" << instances << " instances identical, grids <= " << largest_grid << " controls, T <= 2, "
      << elapsed << " s" << first_mismatch.str();
    return {equal == instances && largest_grid <= 200 && elapsed < 10.0, d.str()};
}

Outcome energy_cross_check() {
    const ControllerContext ctx = default_context();
    const ComputeParams& cp = ctx.compute;
    const ControlGrid full = ControlGrid::full(cp);
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t checked = 0;
    double worst = 0.0;
    while (checked < 1200) {
        SiteState s;
        s.energy_j = cp.slot_s * 1000.0;
        s.q_in_bits = std::floor(u(rng) * 5e7);
        s.q_out_bits = std::floor(u(rng) * 5e7);
        const int prev = 1 + static_cast<int>(rng() % static_cast<unsigned>(cp.max_containers));
        for (int k = 0; k < prev; ++k) s.f_prev.push_back(cp.f_levels[rng() % cp.f_levels.size()]);
        const SlotForecast fc{std::floor(u(rng) * 6e7), std::floor(u(rng) * 6e7), 0.0};
        const auto controls = enumerate_controls(s, full, fc, ctx);
        if (controls.empty()) continue;
        for (int k = 0; k < 12; ++k) {
            const ControlInput& c = controls[rng() % controls.size()];
            const double served = served_load(c, fc.load_a, fc.load_b);
            const double model = site_energy(c, s, served, ctx.radio, cp).site;
            const double ref = oracle::site_energy(c, s, served, ctx.radio, cp);
            worst = std::max(worst, std::abs(model - ref) / std::abs(ref));
            ++checked;
        }
    }
    std::ostringstream d;
    d << checked << " random feasible controls, worst relative difference " << worst;
    return {worst <= 1e-9, d.str()};
}

Scenario default_scenario() {
    RunConfig cfg = default_config();
    cfg.scenario.traces = load_traces(cfg);
    return cfg.scenario;
}

Outcome battery_ledger(const Scenario& s, const SimReport& r) {
    const BatteryParams& b = s.battery;
    std::size_t bad = 0;
    double energy = b.e_init_j;
    for (const SlotRecord& rec : r.records) {
        const double expect =
            std::max(0.0, std::min(b.e_max_j, energy + rec.harvest.selected_j - rec.energy.site - b.leakage_j));
        const bool ok = rec.energy_j == energy && rec.energy.site <= energy &&
                        std::abs(rec.energy_next_j - expect) <= 1e-9 * std::max(1.0, expect) &&
                        rec.energy_next_j >= 0.0 && rec.energy_next_j <= b.e_max_j;
        if (!ok) ++bad;
        energy = rec.energy_next_j;
    }
    std::ostringstream d;
    d << r.records.size() << " slots, " << bad << " ledger failures, E in [" << r.summary.min_energy_j << ", "
      << r.summary.max_energy_j << "] J, violations " << r.summary.violations;
    return {r.records.size() == 1488 && bad == 0 && r.summary.violations == 0, d.str()};
}

Outcome savings_comparison(const SimReport& drc, const SimReport& rrm, double elapsed) {
    const double a = drc.summary.savings_pct;
    const double b = rrm.summary.savings_pct;
    std::ostringstream d;
    d.precision(4);
    d << "DRC-RS " << a << " %, RRM " << b << " %, gap " << a - b << " pp, " << elapsed << " s";
    return {a >= 36.0 && a <= 66.0 && a - b >= 5.0 && elapsed < 60.0, d.str()};
}

Outcome user_scaling(const Scenario& s) {
    const std::vector<int> users{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    const auto curve = savings_curve(s, users);
    bool ok = curve.size() == users.size();
    std::ostringstream d;
    d.precision(4);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (curve[i].drc_rs_pct < curve[i].rrm_pct) ok = false;
        if (i > 0 && (curve[i].drc_rs_pct > curve[i - 1].drc_rs_pct + 2.0 ||
                      curve[i].rrm_pct > curve[i - 1].rrm_pct + 2.0)) {
            ok = false;
        }
        d << (i ? " " : "") << curve[i].n_users << ":" << curve[i].drc_rs_pct << "/" << curve[i].rrm_pct;
    }
    return {ok, "users:drc/rrm " + d.str()};
}

Outcome forecasting(const Scenario& s) {
    const auto rows = forecast_rmse_table(s.traces, s.predictor);
    const std::string csv = rmse_csv(rows);
    bool ok = rows.size() == 4 && std::count(csv.begin(), csv.end(), '\n') == 5 &&
              csv.rfind("series,T=1,T=2,T=3\n", 0) == 0;
    std::ostringstream d;
    d.precision(3);
    for (const RmseRow& r : rows) {
        if (!(r.rmse[0] <= 0.10)) ok = false;
        d << r.series << " " << r.rmse[0] << "/" << r.rmse[1] << "/" << r.rmse[2] << "  ";
    }
    return {ok, "T=1/2/3 " + d.str() + "(4x3 table)"};
}

Outcome qos_bounds(const Scenario& s, const SimReport& drc, const SimReport& rrm) {
    const double bound = delay_bound(s.compute.input_buffer_bits, s.compute.output_buffer_bits,
                                     s.compute.min_link_rate_bps);
    std::size_t bad = 0;
    double worst_slot = 0.0;
    double worst_path = 0.0;
    for (const SimReport* r : {&drc, &rrm}) {
        for (const SlotRecord& rec : r->records) {
            const double sd = slot_delay(rec.control, s.compute);
            const double pd = path_delay(rec.q_in_bits, rec.q_out_bits, rec.control, s.compute,
                                         s.radio.target_rate_bps);
            worst_slot = std::max(worst_slot, sd);
            worst_path = std::max(worst_path, pd);
            if (sd > s.compute.max_delay_s || pd > bound) ++bad;
        }
    }
    Scenario broken = s;
    broken.compute.input_buffer_bits = 1e11; // (r_max/2)(tau - Delta) < L_in
    bool refused = false;
    try {
        run(broken, {}, false);
    } catch (const InfeasibleConfig&) {
        refused = true;
    }
    std::ostringstream d;
    d << "max slot delay " << worst_slot << " s (<= " << s.compute.max_delay_s << "), max path delay " << worst_path
      << " s (<= " << bound << "), " << bad << " violations, infeasible platform "
      << (refused ? "refused" : "NOT refused");
    return {bad == 0 && refused, d.str()};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + RRSITE_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const fs::path root = fs::current_path() / "determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path config = root / "config.json";
    std::ofstream(config) << R"({"seed": 5, "n_users": 25, "user_counts": [10, 30]})" << '\n';

    const char* commands[] = {"forecast", "simulate", "compare"};
    std::size_t files = 0;
    std::string mismatch;
    bool exit_ok = true;
    for (const char* cmd : commands) {
        // Same config and same output directory; the first run is kept aside.
        const fs::path out = root / cmd / "out";
        const fs::path first = root / cmd / "first";
        const std::string args =
            std::string(cmd) + " --config \"" + config.string() + "\" --out \"" + out.string() + "\"";
        if (run_cli(args) != 0) exit_ok = false;
        fs::rename(out, first);
        if (run_cli(args) != 0) exit_ok = false;
        for (const auto& entry : fs::directory_iterator(first)) {
            const fs::path other = out / entry.path().filename();
            ++files;
            if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
                mismatch += std::string(" ") + cmd + "/" + entry.path().filename().string();
            }
        }
    }
    std::ostringstream d;
    d << files << " output files compared across two runs of forecast, simulate and compare"
      << (mismatch.empty() ? ", all byte-identical" : ", differing:" + mismatch)
      << (exit_ok ? "" : ", a command exited non-zero");
    return {exit_ok && mismatch.empty() && files >= 6, d.str()};
}

} // namespace

int main() {
    report(1, "oracle equivalence", oracle_equivalence());
    report(2, "energy model cross-check", energy_cross_check());

    const Scenario s = default_scenario();
    const auto t0 = Clock::now();
    const SimReport drc = run(s);
    Scenario paired = s;
    paired.controller = ControllerKind::rrm;
    const SimReport rrm = run(paired);
    const double elapsed = seconds_since(t0);

    report(3, "battery ledger", battery_ledger(s, drc));
    report(4, "savings comparison", savings_comparison(drc, rrm, elapsed));
    report(5, "user-scaling trend", user_scaling(s));
    report(6, "forecasting", forecasting(s));
    report(7, "QoS bounds", qos_bounds(s, drc, rrm));
    report(8, "determinism", determinism());

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
