#include "rrsite/report.hpp"

#include "rrsite/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <sstream>

namespace rrsite {

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> cols{
        "slot",          "energy_j",      "energy_class",  "solar_j",      "wind_j",        "harvest_j",
        "source",        "load_a_bits",   "load_b_bits",   "gamma_star_bits", "sigma",       "zeta",
        "containers",    "f_mbps",        "drivers",       "nic",          "theta_comm_j",  "theta_cp_j",
        "theta_sw_j",    "theta_of_j",    "theta_lk_j",    "theta_ls_j",   "theta_ch_j",    "theta_comp_j",
        "theta_site_j",  "energy_next_j", "q_in_bits",     "q_out_bits",   "slot_delay_s",  "path_delay_s",
        "cost",          "expected_cost", "depth",         "emergency",    "relaxed",       "shed",
    };
    return cols;
}

ReportWriter::ReportWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    const auto& cols = report_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
    out_ << '\n';
}

void ReportWriter::write(const SlotRecord& r) {
    const ControlInput& c = r.control;
    const EnergyBreakdown& e = r.energy;
    const auto n = [](double v) { return format_number(v); };
    out_ << r.slot << ',' << n(r.energy_j) << ',' << to_string(r.energy_class) << ',' << n(r.harvest.solar_j) << ','
         << n(r.harvest.wind_j) << ',' << n(r.harvest.selected_j) << ',' << to_string(r.harvest.source) << ','
         << n(r.load_a_bits) << ',' << n(r.load_b_bits) << ',' << n(c.gamma_star()) << ',' << c.sigma << ','
         << n(c.zeta) << ',' << c.containers << ',' << n(c.f.empty() ? 0.0 : c.f.front()) << ',' << c.drivers << ','
         << c.nic << ',' << n(e.comm) << ',' << n(e.cp) << ',' << n(e.sw) << ',' << n(e.of) << ',' << n(e.lk) << ','
         << n(e.ls) << ',' << n(e.ch) << ',' << n(e.comp) << ',' << n(e.site) << ',' << n(r.energy_next_j) << ','
         << n(r.q_in_bits) << ',' << n(r.q_out_bits) << ',' << n(r.slot_delay_s) << ',' << n(r.path_delay_s) << ','
         << n(r.cost) << ',' << n(r.expected_cost) << ',' << r.depth << ',' << int(r.emergency) << ','
         << int(r.relaxed) << ',' << int(r.shed) << '\n';
    // Flushed per row so a long run can be inspected while it is going.
    out_.flush();
}

void ReportWriter::close() { out_.close(); }

namespace {

nlohmann::ordered_json summary_object(const SimSummary& s) {
    nlohmann::ordered_json j;
    j["controller"] = to_string(s.controller);
    j["n_users"] = s.n_users;
    j["n_slots"] = s.n_slots;
    j["baseline_j"] = s.baseline_j;
    j["mean_site_j"] = s.mean_site_j;
    j["savings_pct"] = s.savings_pct;
    nlohmann::ordered_json mean;
    mean["comm"] = s.mean_energy.comm;
    mean["cp"] = s.mean_energy.cp;
    mean["sw"] = s.mean_energy.sw;
    mean["of"] = s.mean_energy.of;
    mean["lk"] = s.mean_energy.lk;
    mean["ls"] = s.mean_energy.ls;
    mean["ch"] = s.mean_energy.ch;
    mean["comp"] = s.mean_energy.comp;
    j["mean_energy_j"] = mean;
    nlohmann::ordered_json share;
    const double site = s.mean_energy.site > 0.0 ? s.mean_energy.site : 1.0;
    share["comm"] = s.mean_energy.comm / site;
    share["comp"] = s.mean_energy.comp / site;
    j["energy_share"] = share;
    j["mean_cost"] = s.mean_cost;
    j["min_energy_j"] = s.min_energy_j;
    j["max_energy_j"] = s.max_energy_j;
    j["final_energy_j"] = s.final_energy_j;
    j["max_slot_delay_s"] = s.max_slot_delay_s;
    j["max_path_delay_s"] = s.max_path_delay_s;
    j["delay_bound_s"] = s.delay_bound_s;
    j["violations"] = s.violations;
    j["emergencies"] = s.emergencies;
    j["relaxed_slots"] = s.relaxed_slots;
    j["shed_slots"] = s.shed_slots;
    j["sleep_slots"] = s.sleep_slots;
    return j;
}

} // namespace

std::string summary_json(const SimSummary& primary, const SimSummary* paired_rrm, const std::string& config_json) {
    nlohmann::ordered_json j;
    j["run"] = summary_object(primary);
    if (paired_rrm != nullptr) {
        j["rrm"] = summary_object(*paired_rrm);
        j["savings_gap_pp"] = primary.savings_pct - paired_rrm->savings_pct;
    }
    j["config"] = nlohmann::ordered_json::parse(config_json);
    return j.dump(2) + "\n";
}

std::vector<RmseRow> forecast_rmse_table(const TraceSet& traces, const PredictorConfig& config) {
    const std::pair<const char*, const TraceSeries*> rows[] = {
        {"L_A", &traces.traffic_a},
        {"L_B", &traces.traffic_b},
        {"H_wind", &traces.wind},
        {"H_solar", &traces.solar},
    };
    std::vector<RmseRow> out;
    for (const auto& [name, series] : rows) {
        const TraceSeries norm = normalize(*series);
        const Predictor p = fit(norm.values, config);
        RmseRow row;
        row.series = name;
        for (std::size_t h = 1; h <= 3; ++h) row.rmse[h - 1] = holdout_rmse(p, norm.values, h);
        out.push_back(row);
    }
    return out;
}

std::string rmse_csv(const std::vector<RmseRow>& rows) {
    std::ostringstream out;
    out << "series,T=1,T=2,T=3\n";
    for (const RmseRow& r : rows) {
        out << r.series;
        for (double v : r.rmse) out << ',' << format_number(v);
        out << '\n';
    }
    return out.str();
}

std::string savings_csv(const std::vector<SavingsPoint>& points) {
    std::ostringstream out;
    out << "n_users,drc_rs_savings,rrm_savings\n";
    for (const SavingsPoint& p : points) {
        out << p.n_users << ',' << format_number(p.drc_rs_pct) << ',' << format_number(p.rrm_pct) << '\n';
    }
    return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

} // namespace rrsite
