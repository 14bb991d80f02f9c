#include "rrsite/config.hpp"
#include "rrsite/errors.hpp"
#include "rrsite/report.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace rrsite;

namespace {

std::string field_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<accepted>";
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST(Config, EmptyDocumentKeepsDefaults) {
    const RunConfig c = parse_config("{}");
    EXPECT_EQ(c.scenario.n_users, 20);
    EXPECT_EQ(c.scenario.n_slots, 1488u);
    EXPECT_EQ(c.scenario.horizon, 3u);
    EXPECT_EQ(c.scenario.controller, ControllerKind::drc_rs);
    EXPECT_EQ(c.user_counts, (std::vector<int>{5, 10, 15, 20, 25, 30, 35, 40, 45, 50}));
    EXPECT_TRUE(c.traces.synth);
    EXPECT_EQ(effective_config_json(c), effective_config_json(default_config()));
}

TEST(Config, OverridesAreApplied) {
    const RunConfig c = parse_config(R"({
        "seed": 9, "controller": "rrm", "n_users": 35, "upsilon": 0.25,
        "radio": {"inter_site_m": 500, "path_loss_exp": 3.5},
        "compute": {"max_containers": 10, "nic_formula": "verbatim", "f_levels": [0, 50, 105]},
        "battery": {"e_max_j": 1000000, "e_low_fraction": 0.2},
        "forecast": {"kind": "seasonal_naive"},
        "grid": {"zeta_levels": [0.5, 1.0]},
        "traces": {"solar_peak_j": 1000000}
    })");
    const Scenario& s = c.scenario;
    EXPECT_EQ(s.seed, 9u);
    EXPECT_EQ(s.controller, ControllerKind::rrm);
    EXPECT_EQ(s.n_users, 35);
    EXPECT_EQ(s.weights.upsilon, 0.25);
    EXPECT_EQ(s.radio.inter_site_m, 500.0);
    EXPECT_EQ(s.compute.max_containers, 10);
    EXPECT_EQ(s.compute.nic_formula, NicFormula::verbatim);
    EXPECT_EQ(s.compute.f_levels, (std::vector<double>{0.0, 50.0, 105.0}));
    EXPECT_EQ(s.battery.e_max_j, 1e6);
    EXPECT_DOUBLE_EQ(s.battery.e_low_j, 2e5);
    EXPECT_DOUBLE_EQ(s.battery.e_up_j, 7e5);
    EXPECT_EQ(s.predictor.kind, PredictorKind::seasonal_naive);
    ASSERT_TRUE(s.grid.has_value());
    EXPECT_EQ(s.grid->zeta_levels, (std::vector<double>{0.5, 1.0}));
    EXPECT_EQ(c.traces.synth_options.solar_peak_j, 1e6);
}

TEST(Config, ErrorsNameTheField) {
    EXPECT_EQ(field_of(R"({"users": 3})"), "users");
    EXPECT_EQ(field_of(R"({"battery": {"capacity_kwh": 12}})"), "battery.capacity_kwh");
    EXPECT_EQ(field_of(R"({"horizon": "three"})"), "horizon");
    EXPECT_EQ(field_of(R"({"controller": "greedy"})"), "controller");
    EXPECT_EQ(field_of(R"({"compute": {"nic_formula": "printed"}})"), "compute.nic_formula");
    EXPECT_EQ(field_of(R"({"compute": {"min_containers": 30}})"), "compute");
    EXPECT_EQ(field_of(R"({"sensitive_fraction": 1.5})"), "sensitive_fraction");
    EXPECT_EQ(field_of(R"({"grid": {"f_levels": [0, 60]}})"), "grid");
    EXPECT_EQ(field_of(R"({"n_slots": -1})"), "n_slots");
    EXPECT_EQ(field_of("[1,2]"), "<root>");
    EXPECT_EQ(field_of("{"), "<root>");
}

TEST(Config, EffectiveConfigRoundTrips) {
    const RunConfig c = parse_config(R"({"seed": 4, "n_users": 15, "compute": {"max_drivers": 4}})");
    const std::string once = effective_config_json(c);
    EXPECT_EQ(effective_config_json(parse_config(once)), once);
    const auto j = nlohmann::json::parse(once);
    EXPECT_EQ(j.at("seed").get<int>(), 4);
    EXPECT_EQ(j.at("compute").at("max_drivers").get<int>(), 4);
}

TEST(Config, LoadsFileTracesAndAggregatesThem) {
    const auto dir = std::filesystem::temp_directory_path() / "rrsite_config_traces";
    std::filesystem::create_directories(dir);
    const std::size_t slots = 100 + 4;
    const auto write = [&](const char* name, double scale) {
        std::ofstream out(dir / name);
        out.precision(17);
        out << "timestamp,value\n";
        for (std::size_t i = 0; i < 3 * slots; ++i) {
            out << 600 * i << ',' << scale * (1.0 + std::sin(2.0 * std::numbers::pi * i / 144.0)) << '\n';
        }
    };
    write("a.csv", 10.0);
    write("b.csv", 20.0);
    write("s.csv", 1000.0);
    write("w.csv", 500.0);
    const std::string doc = R"({"warmup_slots": 100, "n_slots": 4, "traces": {"synth": false, "traffic_a": ")" +
                            (dir / "a.csv").string() + R"(", "traffic_b": ")" + (dir / "b.csv").string() +
                            R"(", "solar": ")" + (dir / "s.csv").string() + R"(", "wind": ")" +
                            (dir / "w.csv").string() + R"("}})";
    const RunConfig c = parse_config(doc);
    const TraceSet t = load_traces(c);
    EXPECT_EQ(t.traffic_a.size(), slots);
    EXPECT_EQ(t.traffic_a.slot_s, 1800.0);
    EXPECT_LE(*std::max_element(t.traffic_b.values.begin(), t.traffic_b.values.end()), 1.0);
    // harvest keeps its units: three 10-min samples per slot
    EXPECT_NEAR(t.solar.values[0], 1000.0 * (3.0 + std::sin(2.0 * std::numbers::pi / 144.0) +
                                            std::sin(4.0 * std::numbers::pi / 144.0)),
                1e-9);
    std::filesystem::remove_all(dir);
}

TEST(Report, ColumnOrder) {
    const auto& cols = report_columns();
    ASSERT_EQ(cols.size(), 36u);
    EXPECT_EQ(cols.front(), "slot");
    EXPECT_EQ(cols[9], "gamma_star_bits");
    EXPECT_EQ(cols[24], "theta_site_j");
    EXPECT_EQ(cols.back(), "shed");
}

TEST(Report, NumbersRoundTripInShortestForm) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(289024.0), "289024");
    EXPECT_EQ(format_number(-2.5), "-2.5");
    const double x = 0.1 + 0.2;
    EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(Report, WriterEmitsHeaderAndOneRowPerRecord) {
    const auto path = std::filesystem::temp_directory_path() / "rrsite_report_test.csv";
    {
        ReportWriter w(path);
        SlotRecord r;
        r.control.f = {50.0};
        r.control.gamma = {1.0};
        w.write(r);
        r.slot = 1;
        w.write(r);
        w.close();
    }
    std::istringstream in(read_file(path));
    std::string line;
    std::getline(in, line);
    std::string header;
    for (const auto& c : report_columns()) header += (header.empty() ? "" : ",") + c;
    EXPECT_EQ(line, header);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 35);
    }
    EXPECT_EQ(rows, 2);
    std::filesystem::remove(path);
}

TEST(Report, RmseTableLayout) {
    TraceSet t;
    for (TraceSeries* s : {&t.traffic_a, &t.traffic_b, &t.solar, &t.wind}) s->values.assign(200, 3.0);
    const auto rows = forecast_rmse_table(t, PredictorConfig{});
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].series, "L_A");
    EXPECT_EQ(rows[1].series, "L_B");
    EXPECT_EQ(rows[2].series, "H_wind");
    EXPECT_EQ(rows[3].series, "H_solar");
    for (const auto& r : rows) {
        for (double v : r.rmse) EXPECT_EQ(v, 0.0);
    }
    EXPECT_EQ(rmse_csv(rows), "series,T=1,T=2,T=3\nL_A,0,0,0\nL_B,0,0,0\nH_wind,0,0,0\nH_solar,0,0,0\n");
}

TEST(Report, SavingsCsvAndSummary) {
    EXPECT_EQ(savings_csv({{5, 60.5, 55.25}, {10, 58.0, 50.0}}),
              "n_users,drc_rs_savings,rrm_savings\n5,60.5,55.25\n10,58,50\n");
    SimSummary a;
    a.savings_pct = 51.0;
    a.mean_site_j = 1.0;
    SimSummary b;
    b.controller = ControllerKind::rrm;
    b.savings_pct = 45.0;
    b.mean_site_j = 1.0;
    const auto j = nlohmann::json::parse(summary_json(a, &b, "{\"seed\": 1}"));
    EXPECT_EQ(j.at("run").at("controller"), "drc_rs");
    EXPECT_EQ(j.at("rrm").at("controller"), "rrm");
    EXPECT_DOUBLE_EQ(j.at("savings_gap_pp").get<double>(), 6.0);
    EXPECT_EQ(j.at("config").at("seed"), 1);
    EXPECT_FALSE(nlohmann::json::parse(summary_json(a, nullptr, "{}")).contains("rrm"));
}
