#include "rrsite/errors.hpp"
#include "rrsite/forecast.hpp"
#include "rrsite/trace.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace rrsite;

namespace {

std::vector<double> sinusoid(std::size_t n, std::size_t period = 48) {
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t) {
        v[t] = 0.5 + 0.4 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(period));
    }
    return v;
}

PredictorConfig naive() {
    PredictorConfig c;
    c.kind = PredictorKind::seasonal_naive;
    return c;
}

PredictorConfig autoregressive() { return PredictorConfig{}; }

} // namespace

TEST(Fit, ShortHistoryIsRejected) {
    const std::vector<double> v(95, 1.0);
    EXPECT_THROW(fit(v, naive()), NotEnoughData);
    EXPECT_THROW(fit(v, autoregressive()), NotEnoughData);
    EXPECT_NO_THROW(fit(std::vector<double>(96, 1.0), naive()));
}

TEST(Fit, ConfigurationErrors) {
    const std::vector<double> v(200, 1.0);
    PredictorConfig c;
    c.train_fraction = 0.0;
    EXPECT_THROW(fit(v, c), DomainError);
    c = PredictorConfig{};
    c.ar_order = 0;
    EXPECT_THROW(fit(v, c), DomainError);
}

TEST(Predict, ConstantHistoryReproducesConstant) {
    const std::vector<double> v(120, 7.0);
    for (const auto& cfg : {naive(), autoregressive()}) {
        const Predictor p = fit(v, cfg);
        const ForecastResult r = predict(p, v, 3);
        ASSERT_EQ(r.predicted.size(), 3u);
        for (double x : r.predicted) EXPECT_DOUBLE_EQ(x, 7.0);
    }
}

TEST(Predict, SeasonalNaiveLooksOneSeasonBack) {
    std::vector<double> v(100);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i % 50);
    PredictorConfig c = naive();
    c.train_fraction = 1.0;
    const Predictor p = fit(v, c);
    // step k forecasts slot n-1+k from slot n-1+k-48
    const ForecastResult r = predict(p, v, 3);
    EXPECT_DOUBLE_EQ(r.predicted[0], v[100 - 48]);
    EXPECT_DOUBLE_EQ(r.predicted[1], v[101 - 48]);
    EXPECT_DOUBLE_EQ(r.predicted[2], v[102 - 48]);
}

TEST(Predict, SeasonalNaiveWrapsBeyondOneSeason) {
    const std::vector<double> v = sinusoid(96);
    PredictorConfig c = naive();
    c.train_fraction = 1.0;
    const Predictor p = fit(v, c);
    const ForecastResult r = predict(p, v, 50);
    EXPECT_DOUBLE_EQ(r.predicted[48], r.predicted[0]);
    EXPECT_DOUBLE_EQ(r.predicted[49], r.predicted[1]);
}

TEST(Predict, SeasonalNaiveExactOnSinusoid) {
    const std::vector<double> v = sinusoid(480);
    const Predictor p = fit(v, naive());
    EXPECT_LT(holdout_rmse(p, v, 1), 1e-6);
    // one-step error on the training span as well
    std::vector<double> pred;
    std::vector<double> act;
    for (std::size_t t = 48; t < 336; ++t) {
        pred.push_back(predict(p, std::span<const double>(v).first(t), 1).predicted[0]);
        act.push_back(v[t]);
    }
    EXPECT_LT(rmse(pred, act), 1e-6);
}

TEST(Predict, ThreeStepsOnSinusoidMatchClosedForm) {
    const std::vector<double> v = sinusoid(400);
    for (const auto& cfg : {naive(), autoregressive()}) {
        const Predictor p = fit(v, cfg);
        const std::size_t origin = 350;
        const ForecastResult r = predict(p, std::span<const double>(v).first(origin), 3);
        for (std::size_t k = 0; k < 3; ++k) {
            const double truth =
                0.5 + 0.4 * std::sin(2.0 * std::numbers::pi * static_cast<double>(origin + k) / 48.0);
            EXPECT_LT(std::abs(r.predicted[k] - truth), 0.05) << to_string(cfg.kind) << " step " << k + 1;
        }
    }
}

TEST(Predict, OutputsStayInsideWidenedTrainingRange) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(300);
    for (double& x : v) x = std::max(0.0, 0.2 + 0.3 * g(rng));
    const Predictor p = fit(v, autoregressive());
    const std::vector<double> wild(10, 1000.0);
    for (double x : predict(p, wild, 5).predicted) {
        EXPECT_LE(x, p.upper);
        EXPECT_GE(x, p.lower);
        EXPECT_GE(x, 0.0);
    }
    const std::vector<double> negative(10, -50.0);
    for (double x : predict(p, negative, 5).predicted) EXPECT_GE(x, 0.0);
}

TEST(Fit, NeverReadsHeldOutTail) {
    std::vector<double> v = sinusoid(200);
    const Predictor a = fit(v, autoregressive());
    for (std::size_t i = 140; i < v.size(); ++i) v[i] = 99.0; // train span is the first 140
    const Predictor b = fit(v, autoregressive());
    EXPECT_EQ(a.coefficients, b.coefficients);
    EXPECT_EQ(a.upper, b.upper);
}

TEST(Fit, Deterministic) {
    const TraceSeries s = normalize(synth_trace(SynthProfile::wind, 600, 2));
    const Predictor a = fit(s.values, autoregressive());
    const Predictor b = fit(s.values, autoregressive());
    EXPECT_EQ(a.coefficients, b.coefficients);
    EXPECT_EQ(predict(a, s.values, 3).predicted, predict(b, s.values, 3).predicted);
}

TEST(Fit, DiurnalTraceHeldOutRmseBelowTenth) {
    const TraceSeries s = normalize(synth_trace(SynthProfile::diurnal_traffic, 1488, 4));
    const Predictor p = fit(s.values, autoregressive());
    // independent scoring of the held-out 30%
    const std::size_t start = static_cast<std::size_t>(std::floor(0.7 * 1488));
    double sse = 0.0;
    std::size_t n = 0;
    for (std::size_t t = start; t < s.size(); ++t) {
        const double d = predict(p, std::span<const double>(s.values).first(t), 1).predicted[0] - s.values[t];
        sse += d * d;
        ++n;
    }
    const double score = std::sqrt(sse / static_cast<double>(n));
    EXPECT_LT(score, 0.1);
    EXPECT_DOUBLE_EQ(holdout_rmse(p, s.values, 1), score);
}

TEST(Predict, ZeroHorizonAndShortHistory) {
    const std::vector<double> v = sinusoid(200);
    const Predictor p = fit(v, naive());
    EXPECT_THROW(predict(p, v, 0), DomainError);
    EXPECT_THROW(predict(p, std::span<const double>(v).first(10), 1), NotEnoughData);
}

TEST(Rmse, Examples) {
    const std::vector<double> a{0.1, 0.2, 0.3};
    EXPECT_EQ(rmse(a, a), 0.0);
    EXPECT_DOUBLE_EQ(rmse(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 1.0}), 1.0);
    EXPECT_DOUBLE_EQ(rmse(std::vector<double>{0.0, 0.0}, std::vector<double>{3.0, 4.0}), std::sqrt(12.5));
    EXPECT_THROW(rmse(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}), DomainError);
    EXPECT_THROW(rmse(std::vector<double>{}, std::vector<double>{}), DomainError);
}

TEST(Rmse, PositiveUnlessEqual) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> a(5);
        for (double& x : a) x = u(rng);
        std::vector<double> b = a;
        EXPECT_EQ(rmse(a, b), 0.0);
        b[static_cast<std::size_t>(i % 5)] += 1e-3;
        EXPECT_GT(rmse(a, b), 0.0);
    }
}

TEST(PredictorJson, RoundTrip) {
    const TraceSeries s = normalize(synth_trace(SynthProfile::solar, 400, 6));
    for (const auto& cfg : {naive(), autoregressive()}) {
        const Predictor p = fit(s.values, cfg);
        const Predictor q = predictor_from_json(to_json(p));
        EXPECT_EQ(q.config.kind, p.config.kind);
        EXPECT_EQ(q.config.season_length, p.config.season_length);
        EXPECT_EQ(q.coefficients, p.coefficients);
        EXPECT_EQ(q.lower, p.lower);
        EXPECT_EQ(q.upper, p.upper);
        EXPECT_EQ(predict(q, s.values, 3).predicted, predict(p, s.values, 3).predicted);
    }
    EXPECT_THROW(predictor_from_json("{\"kind\": \"lstm\"}"), DomainError);
    EXPECT_THROW(predictor_from_json("not json"), DomainError);
}
