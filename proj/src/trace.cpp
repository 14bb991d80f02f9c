#include "rrsite/trace.hpp"

#include "rrsite/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace rrsite {

namespace {

constexpr double kSecondsPerDay = 86400.0;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
        s.remove_suffix(1);
    }
    return s;
}

bool parse_int(std::string_view s, std::int64_t& out) {
    if (s.empty()) return false;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

// Howard Hinnant's days_from_civil.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

} // namespace

std::string_view to_string(SeriesLabel label) {
    switch (label) {
    case SeriesLabel::traffic_a: return "traffic_A";
    case SeriesLabel::traffic_b: return "traffic_B";
    case SeriesLabel::solar: return "solar";
    case SeriesLabel::wind: return "wind";
    }
    return "unknown";
}

SeriesLabel series_label_from_string(std::string_view name) {
    if (name == "traffic_A" || name == "traffic_a") return SeriesLabel::traffic_a;
    if (name == "traffic_B" || name == "traffic_b") return SeriesLabel::traffic_b;
    if (name == "solar") return SeriesLabel::solar;
    if (name == "wind") return SeriesLabel::wind;
    throw DomainError("unknown series label '" + std::string(name) + "'");
}

bool TraceSeries::has_gaps() const {
    return std::any_of(values.begin(), values.end(), [](double v) { return std::isnan(v); });
}

std::int64_t parse_timestamp(std::string_view text) {
    text = trim(text);
    std::int64_t epoch = 0;
    if (parse_int(text, epoch)) return epoch;

    // YYYY-MM-DD[T ]HH:MM[:SS][Z|+HH:MM]
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    int consumed = 0;
    const std::string buf(text);
    const int n = std::sscanf(buf.c_str(), "%4d-%2d-%2d%c%2d:%2d%n", &y, &mo, &d, &sep, &h, &mi, &consumed);
    if (n < 6 || (sep != 'T' && sep != ' ') || mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59) {
        throw DomainError("unparseable timestamp '" + buf + "'");
    }
    std::string_view rest = std::string_view(buf).substr(static_cast<std::size_t>(consumed));
    if (!rest.empty() && rest.front() == ':') {
        int sc = 0;
        if (std::sscanf(std::string(rest).c_str(), ":%2d%n", &s, &sc) != 1 || s > 60) {
            throw DomainError("unparseable timestamp '" + buf + "'");
        }
        rest.remove_prefix(static_cast<std::size_t>(sc));
    }
    std::int64_t offset_s = 0;
    if (!rest.empty()) {
        if (rest == "Z") {
        } else if ((rest.front() == '+' || rest.front() == '-') && rest.size() == 6 && rest[3] == ':') {
            std::int64_t oh = 0, om = 0;
            if (!parse_int(rest.substr(1, 2), oh) || !parse_int(rest.substr(4, 2), om)) {
                throw DomainError("unparseable timestamp offset '" + buf + "'");
            }
            offset_s = (oh * 3600 + om * 60) * (rest.front() == '+' ? 1 : -1);
        } else {
            throw DomainError("unparseable timestamp '" + buf + "'");
        }
    }
    const std::int64_t days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
    return days * 86400 + h * 3600 + mi * 60 + s - offset_s;
}

TraceSeries load_trace(const std::filesystem::path& path, SeriesLabel label, double native_resolution_s) {
    if (!(native_resolution_s > 0.0)) throw DomainError("native resolution must be positive");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file " + path.string());

    std::map<std::int64_t, double> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty() || row.front() == '#') continue;
        const auto comma = row.find(',');
        if (comma == std::string_view::npos) throw ParseError(line_no, "expected 'timestamp,value'");
        const std::string_view ts_text = trim(row.substr(0, comma));
        const std::string_view value_text = trim(row.substr(comma + 1));
        if (line_no == 1 && ts_text == "timestamp") continue; // header

        std::int64_t ts = 0;
        try {
            ts = parse_timestamp(ts_text);
        } catch (const DomainError& e) {
            throw ParseError(line_no, e.what());
        }
        double value = 0.0;
        if (!parse_double(value_text, value) || !std::isfinite(value)) {
            throw ParseError(line_no, "value '" + std::string(value_text) + "' is not a number");
        }
        if (value < 0.0) throw ParseError(line_no, "negative value " + std::string(value_text));
        samples[ts] += value;
    }
    if (samples.empty()) throw EmptySeriesError("trace file " + path.string() + " has no samples");

    TraceSeries series;
    series.label = label;
    series.slot_s = native_resolution_s;
    series.start_time = samples.begin()->first;
    const auto span_s = static_cast<double>(samples.rbegin()->first - series.start_time);
    const auto n = static_cast<std::size_t>(std::floor(span_s / native_resolution_s + 1e-9)) + 1;
    series.values.assign(n, std::numeric_limits<double>::quiet_NaN());
    for (const auto& [ts, value] : samples) {
        const double offset = static_cast<double>(ts - series.start_time) / native_resolution_s;
        const auto idx = static_cast<std::size_t>(std::floor(offset + 1e-9));
        double& slot = series.values[idx];
        slot = std::isnan(slot) ? value : slot + value;
    }
    return series;
}

void save_trace(const TraceSeries& series, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace file " + path.string());
    out << "timestamp,value\n";
    char buf[64];
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        if (std::isnan(series.values[i])) continue;
        const auto ts = series.start_time + static_cast<std::int64_t>(std::llround(series.slot_s * static_cast<double>(i)));
        auto res = std::to_chars(buf, buf + sizeof buf, series.values[i]);
        out << ts << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
    }
}

TraceSeries fill_gaps(TraceSeries series) {
    auto& v = series.values;
    const std::size_t n = v.size();
    std::size_t first = 0;
    while (first < n && std::isnan(v[first])) ++first;
    if (first == n) {
        std::fill(v.begin(), v.end(), 0.0);
        return series;
    }
    for (std::size_t i = 0; i < first; ++i) v[i] = v[first];

    std::size_t prev = first;
    for (std::size_t i = first + 1; i < n; ++i) {
        if (std::isnan(v[i])) continue;
        if (i > prev + 1) {
            const double span = static_cast<double>(i - prev);
            for (std::size_t k = prev + 1; k < i; ++k) {
                const double w = static_cast<double>(k - prev) / span;
                v[k] = v[prev] + w * (v[i] - v[prev]);
            }
        }
        prev = i;
    }
    for (std::size_t i = prev + 1; i < n; ++i) v[i] = v[prev];
    return series;
}

TraceSeries aggregate(const TraceSeries& series, double slot_s) {
    if (!(slot_s > 0.0)) throw ResolutionMismatch("slot duration must be positive");
    const double ratio = slot_s / series.slot_s;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
        throw ResolutionMismatch("slot duration " + std::to_string(slot_s) +
                                 " s is not an integer multiple of the native resolution " +
                                 std::to_string(series.slot_s) + " s");
    }
    const auto k = static_cast<std::size_t>(rounded);
    const TraceSeries filled = series.has_gaps() ? fill_gaps(series) : series;

    TraceSeries out;
    out.label = series.label;
    out.slot_s = slot_s;
    out.start_time = series.start_time;
    const std::size_t n = filled.values.size();
    out.values.assign((n + k - 1) / k, 0.0);
    for (std::size_t i = 0; i < n; ++i) out.values[i / k] += filled.values[i];
    return out;
}

TraceSeries normalize(TraceSeries series) {
    double peak = 0.0;
    for (double v : series.values) {
        if (!std::isnan(v)) peak = std::max(peak, v);
    }
    if (peak <= 0.0) return series;
    for (double& v : series.values) v /= peak;
    return series;
}

WorkloadSplit split_workload(double total, double sensitive_fraction) {
    if (!(sensitive_fraction >= 0.0 && sensitive_fraction <= 1.0)) {
        throw DomainError("sensitive fraction must lie in [0,1]");
    }
    if (total < 0.0) throw DomainError("workload must be non-negative");
    WorkloadSplit split;
    split.total = total;
    split.delay_sensitive = sensitive_fraction * total;
    split.delay_tolerant = total - split.delay_sensitive;
    return split;
}

TraceSeries synth_trace(SynthProfile profile, std::size_t n_slots, std::uint64_t seed, const SynthOptions& options) {
    if (n_slots == 0) throw DomainError("n_slots must be at least 1");
    if (!(options.slot_s > 0.0)) throw DomainError("slot duration must be positive");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double slots_per_day = kSecondsPerDay / options.slot_s;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    TraceSeries out;
    out.slot_s = options.slot_s;
    out.values.resize(n_slots);

    switch (profile) {
    case SynthProfile::diurnal_traffic: {
        out.label = SeriesLabel::traffic_a;
        // Trough around 04:00, peak in the late afternoon, mild AR(1) noise.
        double noise = 0.0;
        for (std::size_t t = 0; t < n_slots; ++t) {
            const double hour = std::fmod(static_cast<double>(t) / slots_per_day * 24.0, 24.0);
            const double shape = 0.25 + 0.75 * (0.5 - 0.5 * std::cos(two_pi * (hour - 4.0 - options.phase_shift_h) / 24.0));
            noise = 0.5 * noise + 0.035 * gauss(rng);
            out.values[t] = options.traffic_peak_bits * std::max(0.0, shape + noise);
        }
        break;
    }
    case SynthProfile::solar: {
        out.label = SeriesLabel::solar;
        // Bell between 06:00 and 18:00 scaled by a slowly varying cloud factor.
        double cloud = 0.0;
        for (std::size_t t = 0; t < n_slots; ++t) {
            const double hour = std::fmod(static_cast<double>(t) / slots_per_day * 24.0, 24.0);
            cloud = 0.9 * cloud + 0.05 * gauss(rng);
            double value = 0.0;
            if (hour > 6.0 && hour < 18.0) {
                const double bell = std::sin(std::numbers::pi * (hour - 6.0) / 12.0);
                value = options.solar_peak_j * bell * bell * std::clamp(0.85 + cloud, 0.3, 1.0);
            }
            out.values[t] = value;
        }
        break;
    }
    case SynthProfile::wind: {
        out.label = SeriesLabel::wind;
        // Log-normal AR(1): strictly positive, strongly autocorrelated.
        double x = 0.0;
        constexpr double phi = 0.95;
        constexpr double sigma = 0.2;
        const double innovation = sigma * std::sqrt(1.0 - phi * phi);
        for (std::size_t t = 0; t < n_slots; ++t) {
            x = phi * x + innovation * gauss(rng);
            out.values[t] = options.wind_mean_j * std::exp(x - 0.5 * sigma * sigma);
        }
        break;
    }
    }
    return out;
}

} // namespace rrsite
