#pragma once

#include "rrsite/forecast.hpp"
#include "rrsite/simulator.hpp"

#include <array>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace rrsite {

// Shortest round-trip decimal form; identical bytes on every run.
std::string format_number(double v);

// Column order of report.csv.
const std::vector<std::string>& report_columns();

// Streams one CSV row per slot; the header is written on construction.
class ReportWriter {
public:
    explicit ReportWriter(const std::filesystem::path& path);
    void write(const SlotRecord& rec);
    void close();

private:
    std::ofstream out_;
};

std::string summary_json(const SimSummary& primary, const SimSummary* paired_rrm, const std::string& config_json);

struct RmseRow {
    std::string series; // L_A, L_B, H_wind, H_solar
    std::array<double, 3> rmse{};
};

// Held-out RMSE of each series normalized to [0,1] for horizons 1..3.
std::vector<RmseRow> forecast_rmse_table(const TraceSet& traces, const PredictorConfig& config);
std::string rmse_csv(const std::vector<RmseRow>& rows);

std::string savings_csv(const std::vector<SavingsPoint>& points);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace rrsite
