#pragma once

#include "rrsite/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace rrsite {

struct TraceSource {
    bool synth = true;
    std::string traffic_a; // CSV paths, used when synth is false
    std::string traffic_b;
    std::string solar;
    std::string wind;
    double native_resolution_s = 600.0;
    SynthOptions synth_options;
};

// Everything a command needs. `scenario.traces` stays empty until
// load_traces() fills it.
struct RunConfig {
    Scenario scenario;
    TraceSource traces;
    std::vector<int> user_counts{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    std::string out_dir = "out";
};

RunConfig default_config();

// Unknown keys and wrongly typed values raise ConfigError naming the field
// (dotted path). Missing keys keep their defaults.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

// Full configuration after defaults and overrides, stable key order.
std::string effective_config_json(const RunConfig& config);

// Synthetic or file-based traces covering warm-up plus n_slots, aggregated to
// the slot length; traffic normalized to [0,1].
TraceSet load_traces(const RunConfig& config);

} // namespace rrsite
