#include "rrsite/config.hpp"
#include "rrsite/errors.hpp"
#include "rrsite/report.hpp"
#include "rrsite/simulator.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

namespace {

enum Exit { ok = 0, usage = 1, infeasible = 2, invariant = 3 };

struct Overrides {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> controller;
    std::optional<int> users;
    std::optional<std::size_t> slots;
    bool synth = false;
};

rrsite::RunConfig resolve(const Overrides& o) {
    rrsite::RunConfig cfg = o.config.empty() ? rrsite::default_config() : rrsite::load_config(o.config);
    if (o.out) cfg.out_dir = *o.out;
    if (o.seed) cfg.scenario.seed = *o.seed;
    if (o.controller) {
        try {
            cfg.scenario.controller = rrsite::controller_kind_from_string(*o.controller);
        } catch (const rrsite::DomainError& e) {
            throw rrsite::ConfigError("--controller", e.what());
        }
    }
    if (o.users) {
        if (*o.users < 0) throw rrsite::ConfigError("--users", "must be >= 0");
        cfg.scenario.n_users = *o.users;
    }
    if (o.slots) {
        if (*o.slots == 0) throw rrsite::ConfigError("--slots", "must be >= 1");
        cfg.scenario.n_slots = *o.slots;
    }
    if (o.synth) cfg.traces.synth = true;
    cfg.scenario.traces = rrsite::load_traces(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    return cfg;
}

void refuse_if_infeasible(const rrsite::RunConfig& cfg) {
    const auto& cp = cfg.scenario.compute;
    const rrsite::FeasibilityReport r = rrsite::check_feasibility(cp, cp.input_buffer_bits);
    if (!r.feasible) throw rrsite::InfeasibleConfig("platform infeasible: " + r.detail);
}

int cmd_forecast(const rrsite::RunConfig& cfg) {
    const std::filesystem::path out(cfg.out_dir);
    const auto rows = rrsite::forecast_rmse_table(cfg.scenario.traces, cfg.scenario.predictor);
    rrsite::write_text(out / "forecast_rmse.csv", rrsite::rmse_csv(rows));
    rrsite::write_text(out / "effective_config.json", rrsite::effective_config_json(cfg) + "\n");
    std::cout << rrsite::rmse_csv(rows);
    return ok;
}

int cmd_simulate(const rrsite::RunConfig& cfg) {
    refuse_if_infeasible(cfg);
    const std::filesystem::path out(cfg.out_dir);
    const std::string config_json = rrsite::effective_config_json(cfg);
    rrsite::write_text(out / "effective_config.json", config_json + "\n");

    rrsite::ReportWriter writer(out / "report.csv");
    const rrsite::SimReport main =
        rrsite::run(cfg.scenario, [&writer](const rrsite::SlotRecord& r) { writer.write(r); }, false);
    writer.close();

    std::optional<rrsite::SimSummary> paired;
    if (cfg.scenario.controller != rrsite::ControllerKind::rrm) {
        rrsite::Scenario s = cfg.scenario;
        s.controller = rrsite::ControllerKind::rrm;
        paired = rrsite::run(s, {}, false).summary;
    }
    rrsite::write_text(out / "summary.json",
                       rrsite::summary_json(main.summary, paired ? &*paired : nullptr, config_json));

    std::cout << rrsite::to_string(main.summary.controller) << " savings "
              << rrsite::format_number(main.summary.savings_pct) << " %";
    if (paired) std::cout << ", rrm savings " << rrsite::format_number(paired->savings_pct) << " %";
    std::cout << ", violations " << main.summary.violations << '\n';
    return main.summary.violations == 0 ? ok : invariant;
}

int cmd_compare(const rrsite::RunConfig& cfg) {
    refuse_if_infeasible(cfg);
    const std::filesystem::path out(cfg.out_dir);
    rrsite::write_text(out / "effective_config.json", rrsite::effective_config_json(cfg) + "\n");
    const auto points = rrsite::savings_curve(cfg.scenario, cfg.user_counts);
    const std::string csv = rrsite::savings_csv(points);
    rrsite::write_text(out / "savings_curve.csv", csv);
    std::cout << csv;
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-aware resource control for a shared off-grid BS/MEC site"};
    app.require_subcommand(1);
    Overrides o;
    const auto add_common = [&o](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--seed", o.seed, "seed of the synthetic traces");
        sub->add_option("--controller", o.controller, "drc_rs | rrm | oracle");
        sub->add_option("--users", o.users, "number of users |v(t)|");
        sub->add_option("--slots", o.slots, "number of simulated slots");
        sub->add_flag("--synth", o.synth, "use synthetic traces");
    };
    CLI::App* forecast = app.add_subcommand("forecast", "held-out RMSE table of the four predictors");
    CLI::App* simulate = app.add_subcommand("simulate", "slot-by-slot run, writes report.csv and summary.json");
    CLI::App* compare = app.add_subcommand("compare", "savings versus user count for both controllers");
    add_common(forecast);
    add_common(simulate);
    add_common(compare);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        const rrsite::RunConfig cfg = resolve(o);
        if (forecast->parsed()) return cmd_forecast(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg);
        return cmd_compare(cfg);
    } catch (const rrsite::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return usage;
    } catch (const rrsite::InfeasibleConfig& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return infeasible;
    } catch (const rrsite::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return invariant;
    } catch (const rrsite::EnergyViolation& e) {
        std::cerr << "energy violation: " << e.what() << '\n';
        return invariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    }
}
