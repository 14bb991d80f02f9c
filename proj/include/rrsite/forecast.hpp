#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rrsite {

enum class PredictorKind { seasonal_naive, autoregressive };
std::string to_string(PredictorKind kind);
PredictorKind predictor_kind_from_string(const std::string& name);

struct PredictorConfig {
    PredictorKind kind = PredictorKind::autoregressive;
    std::size_t season_length = 48;
    std::size_t ar_order = 4;
    double train_fraction = 0.7;
};

// Immutable once fitted. `coefficients` holds the intercept followed by the
// lag weights (lag 1 first) for the autoregressive kind and is empty for
// seasonal-naive.
struct Predictor {
    PredictorConfig config;
    std::vector<double> coefficients;
    double lower = 0.0; // clamp range, training range widened by 10%, never < 0
    double upper = 0.0;

    std::size_t min_history() const;
};

struct ForecastResult {
    std::size_t horizon = 0;
    std::vector<double> predicted;
    std::vector<double> actual; // empty unless scored
};

// Fits on the leading train_fraction of `history` only. Throws NotEnoughData
// when history is shorter than two seasons.
Predictor fit(std::span<const double> history, const PredictorConfig& config);

// `history` ends at the last observed slot; the result covers the next
// `horizon` slots. Autoregressive forecasts feed back their own outputs.
ForecastResult predict(const Predictor& p, std::span<const double> history, std::size_t horizon);

double rmse(std::span<const double> predicted, std::span<const double> actual);

// RMSE of the `horizon`-step-ahead forecast over every origin in the held-out
// tail (the part fit() did not see).
double holdout_rmse(const Predictor& p, std::span<const double> series, std::size_t horizon);

std::string to_json(const Predictor& p);
Predictor predictor_from_json(const std::string& text);

} // namespace rrsite
