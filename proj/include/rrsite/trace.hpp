#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rrsite {

enum class SeriesLabel { traffic_a, traffic_b, solar, wind };

std::string_view to_string(SeriesLabel label);
SeriesLabel series_label_from_string(std::string_view name);

// Slot-aggregated exogenous series. Traffic values are bits per slot, harvest
// values joules per slot. Series returned by load_trace may contain NaN for
// slots that were absent from the file; aggregate() fills those.
struct TraceSeries {
    SeriesLabel label = SeriesLabel::traffic_a;
    double slot_s = 1800.0;
    std::int64_t start_time = 0; // epoch seconds
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    bool has_gaps() const;
};

struct WorkloadSplit {
    double total = 0.0;
    double delay_sensitive = 0.0;
    double delay_tolerant = 0.0;
};

inline constexpr double kDefaultSensitiveFraction = 0.8;

// Parses ISO-8601 ("2013-11-01T00:10:00Z", "2013-11-01 00:10:00") or integer
// epoch seconds. Throws DomainError when neither form matches.
std::int64_t parse_timestamp(std::string_view text);

// CSV `timestamp,value`. Rows are sorted, duplicates merged by sum and placed
// on the native-resolution grid starting at the earliest timestamp.
TraceSeries load_trace(const std::filesystem::path& path, SeriesLabel label, double native_resolution_s);
void save_trace(const TraceSeries& series, const std::filesystem::path& path);

// Linear interpolation between neighbours, nearest sample copied into
// leading/trailing gaps. An all-gap series becomes all zeros.
TraceSeries fill_gaps(TraceSeries series);

TraceSeries aggregate(const TraceSeries& series, double slot_s);
TraceSeries normalize(TraceSeries series);
WorkloadSplit split_workload(double total, double sensitive_fraction);

enum class SynthProfile { diurnal_traffic, solar, wind };

struct SynthOptions {
    double slot_s = 1800.0;
    double traffic_peak_bits = 1.0e6;
    double solar_peak_j = 1.5e6;
    double wind_mean_j = 300.0e3;
    double phase_shift_h = 0.0; // shifts the daily traffic profile
};

// Deterministic in (profile, n_slots, seed, options). Daily period is derived
// from options.slot_s.
TraceSeries synth_trace(SynthProfile profile, std::size_t n_slots, std::uint64_t seed,
                        const SynthOptions& options = {});

} // namespace rrsite
