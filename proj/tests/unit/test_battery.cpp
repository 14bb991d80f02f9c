#include "rrsite/battery.hpp"
#include "rrsite/errors.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rrsite;

TEST(SelectSource, MiddayNightAndDeficient) {
    const BatteryParams b;
    const double threshold = 0.05 * 1.5e6;
    const HarvestSlot midday = select_source(9e5, 2e5, 3e5, b, threshold);
    EXPECT_EQ(midday.source, HarvestSource::solar);
    EXPECT_EQ(midday.selected_j, 9e5);

    const HarvestSlot night = select_source(0.0, 2e5, 3e5, b, threshold);
    EXPECT_EQ(night.source, HarvestSource::wind);
    EXPECT_EQ(night.selected_j, 2e5);

    const HarvestSlot low = select_source(9e5, 2e5, b.e_low_j - 1.0, b, threshold);
    EXPECT_EQ(low.source, HarvestSource::both);
    EXPECT_EQ(low.selected_j, 11e5);
}

TEST(SelectSource, DecidesOnForecastWhenGiven) {
    const BatteryParams b;
    // forecast says night, realized solar is positive: wind is taken
    const HarvestSlot s = select_source(5e5, 1e5, 3e5, b, 7.5e4, 0.0);
    EXPECT_EQ(s.source, HarvestSource::wind);
    EXPECT_EQ(s.selected_j, 1e5);
    EXPECT_EQ(s.solar_j, 5e5);
    EXPECT_THROW(select_source(-1.0, 0.0, 1.0, b, 0.0), DomainError);
}

TEST(Step, DirectSubstitution) {
    const BatteryParams b;
    EXPECT_DOUBLE_EQ(step(100e3, 5e3, 3e3, b), 101999.999998);
    BatteryParams tight = b;
    tight.leakage_j = 0.0;
    EXPECT_DOUBLE_EQ(step(100e3, 5e3, 3e3, tight), 102e3);
}

TEST(Step, CapAndFloor) {
    const BatteryParams b;
    EXPECT_EQ(step(b.e_max_j, 10e3, 1e3, b), b.e_max_j);
    EXPECT_EQ(step(5e3, 0.0, 5e3, b), 0.0);
    EXPECT_THROW(step(5e3, 1e6, 5e3 + 1.0, b), EnergyViolation);
}

TEST(Step, MonotoneInHarvestAntitoneInDraw) {
    const BatteryParams b;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> e(0.0, b.e_max_j);
    std::uniform_real_distribution<double> h(0.0, 3e5);
    for (int i = 0; i < 2000; ++i) {
        const double energy = e(rng);
        const double theta = std::uniform_real_distribution<double>(0.0, energy)(rng);
        const double h1 = h(rng);
        const double h2 = h1 + h(rng);
        const double next = step(energy, h1, theta, b);
        EXPECT_LE(next, step(energy, h2, theta, b));
        EXPECT_GE(next, step(energy, h1, 0.5 * (theta + energy), b));
        EXPECT_GE(next, 0.0);
        EXPECT_LE(next, b.e_max_j);
    }
}

TEST(Classify, Thresholds) {
    const BatteryParams b;
    EXPECT_EQ(classify(b.e_low_j - 1.0, b), EnergyClass::deficient);
    EXPECT_EQ(classify(b.e_low_j, b), EnergyClass::nominal);
    EXPECT_EQ(classify(0.5 * (b.e_low_j + b.e_up_j), b), EnergyClass::nominal);
    EXPECT_EQ(classify(b.e_up_j, b), EnergyClass::surplus);
    EXPECT_EQ(to_string(EnergyClass::surplus), "surplus");
}

TEST(BatteryParams, DefaultsAndValidation) {
    const BatteryParams b;
    EXPECT_DOUBLE_EQ(b.e_max_j, 490e3);
    EXPECT_DOUBLE_EQ(b.e_low_j, 147e3);
    EXPECT_DOUBLE_EQ(b.e_up_j, 343e3);
    EXPECT_DOUBLE_EQ(b.e_init_j, b.e_up_j);
    EXPECT_NO_THROW(b.validate());
    BatteryParams bad = b;
    bad.e_low_j = bad.e_up_j + 1.0;
    EXPECT_THROW(bad.validate(), DomainError);
    bad = b;
    bad.e_init_j = b.e_max_j + 1.0;
    EXPECT_THROW(bad.validate(), DomainError);
}
