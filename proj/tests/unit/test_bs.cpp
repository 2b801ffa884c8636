#include "maxent/bs.hpp"
#include "maxent/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace maxent;

namespace {

const BsParams kMarket{100.0, 0.25, 1.0, 1.0};

} // namespace

TEST(Bs, FlatMarketCalls) {
    EXPECT_NEAR(bs_call(kMarket, 100.0), 9.9477, 1e-4);
    EXPECT_NEAR(bs_call(kMarket, 140.0), 1.2139, 1e-4);
    EXPECT_DOUBLE_EQ(bs_call(kMarket, 0.0), 100.0);
}

TEST(Bs, FlatMarketDigitals) {
    EXPECT_NEAR(bs_digital(kMarket, 100.0), 0.4503, 1e-4);
    EXPECT_NEAR(bs_digital(kMarket, 120.0), 0.1965, 1e-4);
    EXPECT_NEAR(bs_digital(kMarket, 1e-8), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(bs_digital(kMarket, 0.0), 1.0);
}

TEST(Bs, NormalCdfAgainstKnownValues) {
    EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
    EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-15);
    EXPECT_NEAR(normal_cdf(-8.0), 6.22096057427178e-16, 1e-28);
}

TEST(Bs, ParamsChecked) {
    EXPECT_THROW(bs_call({0.0, 0.25, 1.0, 1.0}, 100.0), DomainError);
    EXPECT_THROW(bs_call({100.0, -0.1, 1.0, 1.0}, 100.0), DomainError);
    EXPECT_THROW(bs_call({100.0, 0.25, 0.0, 1.0}, 100.0), DomainError);
    EXPECT_THROW(bs_call({100.0, 0.25, 1.0, 1.5}, 100.0), DomainError);
}

TEST(Bs, CallDecreasingConvexInStrikeIncreasingInVol) {
    // Below K = 40 the slope is -1 to double precision.
    double prev = bs_call(kMarket, 39.0);
    double prev_slope = -1.0;
    for (double k = 40.0; k <= 300.0; k += 1.0) {
        const double c = bs_call(kMarket, k);
        EXPECT_LT(c, prev);
        const double slope = c - prev;
        EXPECT_GT(slope, prev_slope) << "at K=" << k;
        prev_slope = slope;
        prev = c;
    }
    double last = 0.0;
    for (double vol = 0.05; vol <= 1.5; vol += 0.05) {
        const double c = bs_call({100.0, vol, 1.0, 1.0}, 110.0);
        EXPECT_GT(c, last);
        last = c;
    }
}

TEST(Bs, DigitalIsMinusStrikeDerivative) {
    const double h = 1e-4;
    for (double k = 40.0; k <= 200.0; k += 10.0) {
        const double fd = -(bs_call(kMarket, k + h) - bs_call(kMarket, k - h)) / (2.0 * h);
        EXPECT_NEAR(fd, bs_digital(kMarket, k), 1e-6) << "K=" << k;
    }
}

TEST(ImpliedVol, GoldenSmilePoint) {
    EXPECT_NEAR(implied_vol(4.0232, 100.0, 120.0, 1.0), 0.2595, 5e-4);
}

TEST(ImpliedVol, RoundTripAcrossVolsAndMoneyness) {
    for (double vol = 0.05; vol <= 1.5 + 1e-12; vol += 0.05) {
        for (double m = 0.5; m <= 2.0 + 1e-12; m += 0.1) {
            const double k = 100.0 * m;
            const double price = bs_call({100.0, vol, 1.0, 1.0}, k);
            const double d1 = (std::log(100.0 / k) + 0.5 * vol * vol) / vol;
            const double vega = 100.0 * std::exp(-0.5 * d1 * d1) / std::sqrt(2.0 * M_PI);
            if (vega < 1e-4) {
                continue; // a price ulp moves the vol by more than the tolerance
            }
            EXPECT_NEAR(implied_vol(price, 100.0, k, 1.0), vol, 1e-8) << "vol=" << vol << " K=" << k;
        }
    }
}

TEST(ImpliedVol, SpxRoundTripThroughSliceForward) {
    const double t = 161.0 / 365.0;
    const double vol = implied_vol(246.30, 1177.0, 950.0, t);
    EXPECT_NEAR(bs_call({1177.0, vol, t, 1.0}, 950.0), 246.30, 1e-9);
}

TEST(ImpliedVol, RejectsArbitrageablePrices) {
    EXPECT_THROW(implied_vol(19.0, 100.0, 80.0, 1.0), OutOfRange);
    EXPECT_THROW(implied_vol(100.0, 100.0, 80.0, 1.0), OutOfRange);
    EXPECT_THROW(implied_vol(0.0, 100.0, 120.0, 1.0), OutOfRange);
    EXPECT_THROW(implied_vol(1.0, 100.0, 0.0, 1.0), DomainError);
}
