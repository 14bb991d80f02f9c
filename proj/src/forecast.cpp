#include "rrsite/forecast.hpp"

#include "rrsite/errors.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace rrsite {

std::string to_string(PredictorKind kind) {
    return kind == PredictorKind::seasonal_naive ? "seasonal_naive" : "autoregressive";
}

PredictorKind predictor_kind_from_string(const std::string& name) {
    if (name == "seasonal_naive") return PredictorKind::seasonal_naive;
    if (name == "autoregressive") return PredictorKind::autoregressive;
    throw DomainError("unknown predictor kind '" + name + "'");
}

std::size_t Predictor::min_history() const {
    return config.kind == PredictorKind::seasonal_naive ? config.season_length : config.ar_order;
}

namespace {

std::size_t train_length(std::size_t n, double fraction) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction));
}

std::vector<double> fit_ar(std::span<const double> train, std::size_t order) {
    const std::size_t rows = train.size() - order;
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(order + 1));
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + order;
        const auto ri = static_cast<Eigen::Index>(r);
        x(ri, 0) = 1.0;
        for (std::size_t lag = 1; lag <= order; ++lag) x(ri, static_cast<Eigen::Index>(lag)) = train[t - lag];
        y(ri) = train[t];
    }
    const Eigen::VectorXd beta = x.colPivHouseholderQr().solve(y);
    return {beta.data(), beta.data() + beta.size()};
}

} // namespace

Predictor fit(std::span<const double> history, const PredictorConfig& config) {
    if (config.season_length == 0) throw DomainError("season length must be >= 1");
    if (!(config.train_fraction > 0.0 && config.train_fraction <= 1.0)) {
        throw DomainError("train fraction must lie in (0,1]");
    }
    if (history.size() < 2 * config.season_length) {
        throw NotEnoughData("history of " + std::to_string(history.size()) + " slots is shorter than two seasons (" +
                            std::to_string(2 * config.season_length) + ")");
    }
    const std::span<const double> train = history.first(train_length(history.size(), config.train_fraction));

    Predictor p;
    p.config = config;
    if (config.kind == PredictorKind::autoregressive) {
        if (config.ar_order == 0) throw DomainError("autoregressive order must be >= 1");
        if (train.size() < 2 * (config.ar_order + 1)) {
            throw NotEnoughData("training span too short for autoregressive order " +
                                std::to_string(config.ar_order));
        }
        p.coefficients = fit_ar(train, config.ar_order);
    } else if (train.size() < config.season_length) {
        throw NotEnoughData("training span shorter than one season");
    }

    const auto [lo, hi] = std::minmax_element(train.begin(), train.end());
    const double headroom = 0.1 * (*hi - *lo);
    p.lower = std::max(*lo - headroom, 0.0);
    p.upper = std::max(*hi + headroom, 0.0);
    return p;
}

ForecastResult predict(const Predictor& p, std::span<const double> history, std::size_t horizon) {
    if (horizon == 0) throw DomainError("forecast horizon must be >= 1");
    if (history.size() < p.min_history()) {
        throw NotEnoughData("predictor needs " + std::to_string(p.min_history()) + " slots of history");
    }
    ForecastResult out;
    out.horizon = horizon;
    out.predicted.reserve(horizon);
    const auto clamp = [&p](double v) { return std::clamp(v, p.lower, p.upper); };

    if (p.config.kind == PredictorKind::seasonal_naive) {
        const std::size_t s = p.config.season_length;
        const std::size_t n = history.size();
        for (std::size_t k = 1; k <= horizon; ++k) {
            // Step k maps to slot n-1+k; one season earlier is n-1+k-s, wrapping
            // forward by whole seasons when k > s.
            const std::size_t back = s - ((k - 1) % s);
            out.predicted.push_back(clamp(history[n - back]));
        }
        return out;
    }

    const std::size_t order = p.config.ar_order;
    std::vector<double> window(history.end() - static_cast<std::ptrdiff_t>(order), history.end());
    for (std::size_t k = 0; k < horizon; ++k) {
        double v = p.coefficients[0];
        for (std::size_t lag = 1; lag <= order; ++lag) v += p.coefficients[lag] * window[window.size() - lag];
        v = clamp(v);
        out.predicted.push_back(v);
        window.push_back(v);
    }
    return out;
}

double rmse(std::span<const double> predicted, std::span<const double> actual) {
    if (predicted.size() != actual.size()) throw DomainError("rmse: length mismatch");
    if (predicted.empty()) throw DomainError("rmse: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - actual[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(predicted.size()));
}

double holdout_rmse(const Predictor& p, std::span<const double> series, std::size_t horizon) {
    if (horizon == 0) throw DomainError("forecast horizon must be >= 1");
    const std::size_t start = std::max(train_length(series.size(), p.config.train_fraction), p.min_history());
    if (start + horizon > series.size()) throw NotEnoughData("held-out span shorter than the horizon");
    std::vector<double> predicted;
    std::vector<double> actual;
    for (std::size_t origin = start; origin + horizon <= series.size(); ++origin) {
        const ForecastResult f = predict(p, series.first(origin), horizon);
        predicted.push_back(f.predicted.back());
        actual.push_back(series[origin + horizon - 1]);
    }
    return rmse(predicted, actual);
}

std::string to_json(const Predictor& p) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(p.config.kind);
    j["season_length"] = p.config.season_length;
    j["ar_order"] = p.config.ar_order;
    j["train_fraction"] = p.config.train_fraction;
    j["coefficients"] = p.coefficients;
    j["lower"] = p.lower;
    j["upper"] = p.upper;
    return j.dump(2);
}

Predictor predictor_from_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        Predictor p;
        p.config.kind = predictor_kind_from_string(j.at("kind").get<std::string>());
        p.config.season_length = j.at("season_length").get<std::size_t>();
        p.config.ar_order = j.at("ar_order").get<std::size_t>();
        p.config.train_fraction = j.at("train_fraction").get<double>();
        p.coefficients = j.at("coefficients").get<std::vector<double>>();
        p.lower = j.at("lower").get<double>();
        p.upper = j.at("upper").get<double>();
        if (p.config.kind == PredictorKind::autoregressive && p.coefficients.size() != p.config.ar_order + 1) {
            throw DomainError("coefficient count does not match the autoregressive order");
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("predictor document: ") + e.what());
    }
}

} // namespace rrsite
