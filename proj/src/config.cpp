#include "rrsite/config.hpp"

#include "rrsite/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace rrsite {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Reads the fields of one JSON object and rejects the ones nobody asked for.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    void number(const char* key, double& out) {
        if (const json* v = take(key)) {
            if (!v->is_number()) throw ConfigError(field(key), "expected a number");
            out = v->get<double>();
        }
    }

    void integer(const char* key, int& out) {
        if (const json* v = take(key)) {
            if (!v->is_number_integer()) throw ConfigError(field(key), "expected an integer");
            out = v->get<int>();
        }
    }

    void count(const char* key, std::size_t& out) {
        if (const json* v = take(key)) {
            if (!v->is_number_integer() || v->get<long long>() < 0) {
                throw ConfigError(field(key), "expected a non-negative integer");
            }
            out = v->get<std::size_t>();
        }
    }

    void seed(const char* key, std::uint64_t& out) {
        if (const json* v = take(key)) {
            if (!v->is_number_unsigned()) throw ConfigError(field(key), "expected a non-negative integer");
            out = v->get<std::uint64_t>();
        }
    }

    void boolean(const char* key, bool& out) {
        if (const json* v = take(key)) {
            if (!v->is_boolean()) throw ConfigError(field(key), "expected true or false");
            out = v->get<bool>();
        }
    }

    void string(const char* key, std::string& out) {
        if (const json* v = take(key)) {
            if (!v->is_string()) throw ConfigError(field(key), "expected a string");
            out = v->get<std::string>();
        }
    }

    template <typename T>
    void list(const char* key, std::vector<T>& out) {
        if (const json* v = take(key)) {
            if (!v->is_array()) throw ConfigError(field(key), "expected an array");
            std::vector<T> values;
            for (const json& e : *v) {
                const bool ok = std::is_integral_v<T> ? e.is_number_integer() : e.is_number();
                if (!ok) throw ConfigError(field(key), "unexpected element type");
                values.push_back(e.get<T>());
            }
            out = std::move(values);
        }
    }

    // Parses an enum-like string through `convert`, mapping its errors to the field.
    template <typename T, typename F>
    void choice(const char* key, T& out, F convert) {
        std::string text;
        if (take_peek(key)) {
            string(key, text);
            try {
                out = convert(text);
            } catch (const DomainError& e) {
                throw ConfigError(field(key), e.what());
            }
        }
    }

    const json* object(const char* key) { return take(key); }

    std::string field(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.count(key)) throw ConfigError(field(key.c_str()), "unknown field");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;

    bool take_peek(const char* key) const { return j_.contains(key); }

    const json* take(const char* key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }
};

template <typename F>
void with_object(ObjectReader& parent, const char* key, F body) {
    if (const json* v = parent.object(key)) {
        ObjectReader r(*v, parent.field(key));
        body(r);
        r.finish();
    }
}

NicFormula nic_formula_from_string(const std::string& s) {
    if (s == "corrected") return NicFormula::corrected;
    if (s == "verbatim") return NicFormula::verbatim;
    throw DomainError("expected corrected or verbatim");
}

ViolationPolicy violation_policy_from_string(const std::string& s) {
    if (s == "abort") return ViolationPolicy::abort;
    if (s == "count") return ViolationPolicy::count;
    throw DomainError("expected abort or count");
}

} // namespace

RunConfig default_config() { return RunConfig{}; }

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
    }
    RunConfig cfg = default_config();
    Scenario& s = cfg.scenario;
    ObjectReader root(doc, "");

    root.seed("seed", s.seed);
    root.choice("controller", s.controller, controller_kind_from_string);
    root.integer("n_users", s.n_users);
    root.count("n_slots", s.n_slots);
    root.count("warmup_slots", s.warmup_slots);
    root.count("horizon", s.horizon);
    root.number("per_user_bits", s.per_user_bits);
    root.number("sensitive_fraction", s.sensitive_fraction);
    root.number("reservation_fraction", s.reservation_fraction);
    root.number("upsilon", s.weights.upsilon);
    root.choice("f2_reference", s.f2_reference, f2_reference_from_string);
    root.choice("on_violation", s.on_violation, violation_policy_from_string);
    root.list("user_counts", cfg.user_counts);
    root.string("out_dir", cfg.out_dir);

    with_object(root, "radio", [&](ObjectReader& r) {
        RadioParams& p = s.radio;
        r.number("bandwidth_hz", p.bandwidth_hz);
        r.number("noise_w_per_hz", p.noise_w_per_hz);
        r.number("inter_site_m", p.inter_site_m);
        r.number("path_loss_exp", p.path_loss_exp);
        r.number("path_loss_const", p.path_loss_const);
        r.number("target_rate_bps", p.target_rate_bps);
        r.number("bs_power_w", p.bs_power_w);
        r.number("backhaul_power_w", p.backhaul_power_w);
        r.number("data_j_per_byte", p.data_j_per_byte);
    });

    with_object(root, "compute", [&](ObjectReader& r) {
        ComputeParams& p = s.compute;
        r.integer("max_containers", p.max_containers);
        r.integer("min_containers", p.min_containers);
        r.list("f_levels", p.f_levels);
        r.number("container_idle_j", p.container_idle_j);
        r.number("container_max_j", p.container_max_j);
        r.number("switch_cost", p.switch_cost);
        r.number("max_processing_s", p.max_processing_s);
        r.number("max_task_bits", p.max_task_bits);
        r.number("nic_idle_j", p.nic_idle_j);
        r.number("nic_max_j", p.nic_max_j);
        r.choice("nic_formula", p.nic_formula, nic_formula_from_string);
        r.number("link_power_w", p.link_power_w);
        r.number("link_rtt_s", p.link_rtt_s);
        r.number("min_link_rate_bps", p.min_link_rate_bps);
        r.number("max_link_rate_bps", p.max_link_rate_bps);
        r.integer("max_drivers", p.max_drivers);
        r.number("driver_j_per_s", p.driver_j_per_s);
        r.number("input_buffer_bits", p.input_buffer_bits);
        r.number("output_buffer_bits", p.output_buffer_bits);
        r.number("cache_lambda", p.cache_lambda);
        r.number("cache_tr_j", p.cache_tr_j);
        r.number("cache_j", p.cache_j);
        r.number("slot_s", p.slot_s);
        r.number("max_delay_s", p.max_delay_s);
    });

    with_object(root, "battery", [&](ObjectReader& r) {
        double e_max = s.battery.e_max_j;
        double low = s.battery.e_low_j / e_max;
        double up = s.battery.e_up_j / e_max;
        double init = s.battery.e_init_j / e_max;
        r.number("e_max_j", e_max);
        r.number("e_low_fraction", low);
        r.number("e_up_fraction", up);
        r.number("e_init_fraction", init);
        r.number("leakage_j", s.battery.leakage_j);
        r.number("offpeak_fraction", s.battery.offpeak_fraction);
        s.battery.e_max_j = e_max;
        s.battery.e_low_j = low * e_max;
        s.battery.e_up_j = up * e_max;
        s.battery.e_init_j = init * e_max;
    });

    with_object(root, "forecast", [&](ObjectReader& r) {
        r.choice("kind", s.predictor.kind, predictor_kind_from_string);
        r.count("season_length", s.predictor.season_length);
        r.count("ar_order", s.predictor.ar_order);
        r.number("train_fraction", s.predictor.train_fraction);
    });

    with_object(root, "grid", [&](ObjectReader& r) {
        ControlGrid g = ControlGrid::full(s.compute);
        r.list("zeta_levels", g.zeta_levels);
        r.list("sigma_options", g.sigma_options);
        r.list("container_counts", g.container_counts);
        r.list("f_levels", g.f_levels);
        r.list("driver_counts", g.driver_counts);
        r.list("nic_options", g.nic_options);
        s.grid = g;
    });

    with_object(root, "traces", [&](ObjectReader& r) {
        TraceSource& t = cfg.traces;
        r.boolean("synth", t.synth);
        r.string("traffic_a", t.traffic_a);
        r.string("traffic_b", t.traffic_b);
        r.string("solar", t.solar);
        r.string("wind", t.wind);
        r.number("native_resolution_s", t.native_resolution_s);
        r.number("solar_peak_j", t.synth_options.solar_peak_j);
        r.number("wind_mean_j", t.synth_options.wind_mean_j);
    });
    root.finish();

    // Semantic checks, reported against the owning section.
    const auto check = [](const char* section, auto&& fn) {
        try {
            fn();
        } catch (const DomainError& e) {
            throw ConfigError(section, e.what());
        }
    };
    check("radio", [&] { s.radio.validate(); });
    check("compute", [&] { s.compute.validate(); });
    check("battery", [&] { s.battery.validate(); });
    check("upsilon", [&] { s.weights.validate(); });
    if (s.grid) check("grid", [&] { s.grid->validate(s.compute); });
    if (s.horizon == 0) throw ConfigError("horizon", "must be >= 1");
    if (s.n_slots == 0) throw ConfigError("n_slots", "must be >= 1");
    if (s.n_users < 0) throw ConfigError("n_users", "must be >= 0");
    if (!(s.sensitive_fraction > 0.0 && s.sensitive_fraction <= 1.0)) {
        throw ConfigError("sensitive_fraction", "must lie in (0,1]");
    }
    if (!(s.reservation_fraction > 0.0 && s.reservation_fraction <= 1.0)) {
        throw ConfigError("reservation_fraction", "must lie in (0,1]");
    }
    if (!cfg.traces.synth &&
        (cfg.traces.traffic_a.empty() || cfg.traces.traffic_b.empty() || cfg.traces.solar.empty() ||
         cfg.traces.wind.empty())) {
        throw ConfigError("traces", "file traces need traffic_a, traffic_b, solar and wind paths");
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string effective_config_json(const RunConfig& cfg) {
    const Scenario& s = cfg.scenario;
    ordered_json j;
    j["seed"] = s.seed;
    j["controller"] = to_string(s.controller);
    j["n_users"] = s.n_users;
    j["n_slots"] = s.n_slots;
    j["warmup_slots"] = s.warmup_slots;
    j["horizon"] = s.horizon;
    j["per_user_bits"] = s.per_user_bits;
    j["sensitive_fraction"] = s.sensitive_fraction;
    j["reservation_fraction"] = s.reservation_fraction;
    j["upsilon"] = s.weights.upsilon;
    j["f2_reference"] = to_string(s.f2_reference);
    j["on_violation"] = s.on_violation == ViolationPolicy::abort ? "abort" : "count";
    j["user_counts"] = cfg.user_counts;
    j["out_dir"] = cfg.out_dir;

    ordered_json radio;
    radio["bandwidth_hz"] = s.radio.bandwidth_hz;
    radio["noise_w_per_hz"] = s.radio.noise_w_per_hz;
    radio["inter_site_m"] = s.radio.inter_site_m;
    radio["path_loss_exp"] = s.radio.path_loss_exp;
    radio["path_loss_const"] = s.radio.path_loss_const;
    radio["target_rate_bps"] = s.radio.target_rate_bps;
    radio["bs_power_w"] = s.radio.bs_power_w;
    radio["backhaul_power_w"] = s.radio.backhaul_power_w;
    radio["data_j_per_byte"] = s.radio.data_j_per_byte;
    j["radio"] = radio;

    const ComputeParams& c = s.compute;
    ordered_json compute;
    compute["max_containers"] = c.max_containers;
    compute["min_containers"] = c.min_containers;
    compute["f_levels"] = c.f_levels;
    compute["container_idle_j"] = c.container_idle_j;
    compute["container_max_j"] = c.container_max_j;
    compute["switch_cost"] = c.switch_cost;
    compute["max_processing_s"] = c.max_processing_s;
    compute["max_task_bits"] = c.max_task_bits;
    compute["nic_idle_j"] = c.nic_idle_j;
    compute["nic_max_j"] = c.nic_max_j;
    compute["nic_formula"] = c.nic_formula == NicFormula::corrected ? "corrected" : "verbatim";
    compute["link_power_w"] = c.link_power_w;
    compute["link_rtt_s"] = c.link_rtt_s;
    compute["min_link_rate_bps"] = c.min_link_rate_bps;
    compute["max_link_rate_bps"] = c.max_link_rate_bps;
    compute["max_drivers"] = c.max_drivers;
    compute["driver_j_per_s"] = c.driver_j_per_s;
    compute["input_buffer_bits"] = c.input_buffer_bits;
    compute["output_buffer_bits"] = c.output_buffer_bits;
    compute["cache_lambda"] = c.cache_lambda;
    compute["cache_tr_j"] = c.cache_tr_j;
    compute["cache_j"] = c.cache_j;
    compute["slot_s"] = c.slot_s;
    compute["max_delay_s"] = c.max_delay_s;
    j["compute"] = compute;

    ordered_json battery;
    battery["e_max_j"] = s.battery.e_max_j;
    battery["e_low_fraction"] = s.battery.e_low_j / s.battery.e_max_j;
    battery["e_up_fraction"] = s.battery.e_up_j / s.battery.e_max_j;
    battery["e_init_fraction"] = s.battery.e_init_j / s.battery.e_max_j;
    battery["leakage_j"] = s.battery.leakage_j;
    battery["offpeak_fraction"] = s.battery.offpeak_fraction;
    j["battery"] = battery;

    ordered_json forecast;
    forecast["kind"] = to_string(s.predictor.kind);
    forecast["season_length"] = s.predictor.season_length;
    forecast["ar_order"] = s.predictor.ar_order;
    forecast["train_fraction"] = s.predictor.train_fraction;
    j["forecast"] = forecast;

    const ControlGrid g = s.effective_grid();
    ordered_json grid;
    grid["zeta_levels"] = g.zeta_levels;
    grid["sigma_options"] = g.sigma_options;
    grid["container_counts"] = g.container_counts;
    grid["f_levels"] = g.f_levels;
    grid["driver_counts"] = g.driver_counts;
    grid["nic_options"] = g.nic_options;
    j["grid"] = grid;

    ordered_json traces;
    traces["synth"] = cfg.traces.synth;
    traces["traffic_a"] = cfg.traces.traffic_a;
    traces["traffic_b"] = cfg.traces.traffic_b;
    traces["solar"] = cfg.traces.solar;
    traces["wind"] = cfg.traces.wind;
    traces["native_resolution_s"] = cfg.traces.native_resolution_s;
    traces["solar_peak_j"] = cfg.traces.synth_options.solar_peak_j;
    traces["wind_mean_j"] = cfg.traces.synth_options.wind_mean_j;
    j["traces"] = traces;
    return j.dump(2);
}

TraceSet load_traces(const RunConfig& cfg) {
    const Scenario& s = cfg.scenario;
    const std::size_t length = s.warmup_slots + s.n_slots;
    if (cfg.traces.synth) {
        SynthOptions opt = cfg.traces.synth_options;
        opt.slot_s = s.compute.slot_s;
        return synth_traces(length, s.seed, opt);
    }
    const auto load = [&](const std::string& path, SeriesLabel label, bool normalized) {
        TraceSeries series = aggregate(load_trace(path, label, cfg.traces.native_resolution_s), s.compute.slot_s);
        if (normalized) series = normalize(std::move(series));
        if (series.size() > length) series.values.resize(length);
        return series;
    };
    TraceSet set;
    set.traffic_a = load(cfg.traces.traffic_a, SeriesLabel::traffic_a, true);
    set.traffic_b = load(cfg.traces.traffic_b, SeriesLabel::traffic_b, true);
    set.solar = load(cfg.traces.solar, SeriesLabel::solar, false);
    set.wind = load(cfg.traces.wind, SeriesLabel::wind, false);
    return set;
}

} // namespace rrsite
