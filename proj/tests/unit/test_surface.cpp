#include "maxent/bs.hpp"
#include "maxent/density.hpp"
#include "maxent/surface.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace maxent;
using maxent::testing::flat_market;

TEST(Smile, OneStrikeGoldenRow) {
    const MedDensity d = calibrate(flat_market({100}));
    const std::vector<double> k{20, 40, 60, 80, 100, 120, 140, 160, 180};
    const std::vector<double> expect{0.6213, 0.4626, 0.3617, 0.2888, 0.2500, 0.2595, 0.2704, 0.2784, 0.2841};
    const auto vols = smile(d, k, 1.0);
    for (std::size_t i = 0; i < k.size(); ++i) {
        ASSERT_TRUE(vols[i].has_value()) << k[i];
        EXPECT_NEAR(*vols[i], expect[i], 5e-4) << k[i];
    }
}

TEST(Smile, CalibratedStrikesRecoverInputVol) {
    const MedDensity d = calibrate(flat_market({60, 80, 100, 120, 140}));
    const std::vector<double> k{60, 80, 100, 120, 140};
    for (const auto& v : smile(d, k, 1.0)) {
        ASSERT_TRUE(v.has_value());
        EXPECT_NEAR(*v, 0.25, 1e-6);
    }
}

TEST(Smile, FailedInversionLeftEmpty) {
    // Deep in the money the time value is below double resolution.
    const MedDensity d = calibrate(flat_market({100}, 100.0, 0.25, 0.01));
    const std::vector<double> k{1e-3, 100.0};
    const auto v = smile(d, k, 0.01);
    EXPECT_FALSE(v[0].has_value());
    EXPECT_TRUE(v[1].has_value());
}

TEST(MoneynessGrid, LogSpacedEndpoints) {
    const auto g = log_moneyness_grid(100.0);
    ASSERT_EQ(g.size(), 31u);
    EXPECT_DOUBLE_EQ(g.front(), 50.0);
    EXPECT_DOUBLE_EQ(g.back(), 200.0);
    for (std::size_t i = 2; i < g.size(); ++i) {
        EXPECT_NEAR(g[i] / g[i - 1], g[1] / g[0], 1e-12);
    }
    EXPECT_THROW(log_moneyness_grid(100.0, 2.0, 0.5), DomainError);
}

TEST(AtmSurface, AtmVolExactAndCellsRoundTrip) {
    const std::vector<double> t{0.1, 0.5, 1.0, 2.0, 5.0};
    const auto strikes = log_moneyness_grid(100.0);
    const auto grid = atm_surface(100.0, 0.25, t, strikes);
    ASSERT_EQ(grid.vols.size(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const std::vector<double> atm{100.0};
        const auto atm_vol = atm_surface(100.0, 0.25, std::vector<double>{t[i]}, atm).vols[0][0];
        ASSERT_TRUE(atm_vol.has_value());
        EXPECT_NEAR(*atm_vol, 0.25, 1e-10);

        const BsParams p{100.0, 0.25, t[i], 1.0};
        const MedDensity d =
            calibrate(MaturitySlice(t[i], 1.0, {0.0, 100.0}, {100.0, bs_call(p, 100.0)}, {1.0, bs_digital(p, 100.0)}));
        for (std::size_t j = 0; j < strikes.size(); ++j) {
            ASSERT_TRUE(grid.vols[i][j].has_value()) << t[i] << ' ' << strikes[j];
            const double v = *grid.vols[i][j];
            EXPECT_GT(v, 0.0);
            EXPECT_NEAR(bs_call({100.0, v, t[i], 1.0}, strikes[j]), price_call(d, strikes[j]), 1e-9);
        }
    }
}

TEST(AtmSurface, OneYearRowMatchesGolden) {
    const std::vector<double> k{20, 60, 120, 180};
    const std::vector<double> expect{0.6213, 0.3617, 0.2595, 0.2841};
    const auto grid = atm_surface(100.0, 0.25, std::vector<double>{1.0}, k);
    for (std::size_t j = 0; j < k.size(); ++j) {
        EXPECT_NEAR(*grid.vols[0][j], expect[j], 5e-4);
    }
}

TEST(AtmSurface, SmileDecaysWithMaturity) {
    const std::vector<double> t{0.1, 0.5, 1.0, 2.0, 5.0};
    std::vector<double> k;
    for (double m = 0.8; m <= 1.2 + 1e-12; m += 0.01) {
        k.push_back(100.0 * m);
    }
    const auto grid = atm_surface(100.0, 0.25, t, k);
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& row : grid.vols) {
        double amp = 0.0;
        for (const auto& v : row) {
            amp = std::max(amp, *v - 0.25);
        }
        EXPECT_LE(amp, prev);
        prev = amp;
    }
}

TEST(AtmSurface, TermStructureAndValidation) {
    const std::vector<double> t{0.5, 1.0};
    const std::vector<double> vols{0.3, 0.2};
    const std::vector<double> k{100.0};
    const auto grid = atm_surface(100.0, vols, t, k);
    EXPECT_NEAR(*grid.vols[0][0], 0.3, 1e-10);
    EXPECT_NEAR(*grid.vols[1][0], 0.2, 1e-10);
    EXPECT_THROW(atm_surface(100.0, std::vector<double>{0.3}, t, k), DomainError);
    EXPECT_THROW(atm_surface(100.0, 0.25, std::vector<double>{1.0, 0.5}, k), DomainError);
}
