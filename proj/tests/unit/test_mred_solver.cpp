#include "maxent/density.hpp"
#include "maxent/mred_solver.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace maxent;
using maxent::testing::flat_market;
using maxent::testing::quad;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const LogNormalPrior kPrior20{100.0, 0.20, 1.0};

// \int f h over each bucket up to the density's upper limit.
template <class F>
double integrate_h(const MredDensity& d, F f) {
    double total = 0.0;
    for (const auto& b : d.buckets()) {
        const double hi = std::min(b.upper, d.upper_limit());
        total += quad([&](double x) { return f(x) * mred_pdf(d, x); }, b.lower, hi, 1e-12);
    }
    return total;
}

} // namespace

TEST(LogNormalPrior, UnitMassAndMean) {
    const auto p = [](double x) { return std::exp(kPrior20.log_pdf(x)); };
    EXPECT_NEAR(quad(p, 0.0, kInf), 1.0, 1e-10);
    EXPECT_NEAR(quad([&](double x) { return x * p(x); }, 0.0, kInf), 100.0, 1e-8);
    EXPECT_EQ(kPrior20.log_pdf(0.0), -kInf);
}

TEST(MredCalibrate, PriorMeetingConstraintsIsUntouched) {
    const auto slice = flat_market({60, 80, 100, 120, 140}, 100.0, 0.20);
    const auto d = mred_calibrate(slice, kPrior20);
    for (const auto& b : d.buckets()) {
        EXPECT_NEAR(b.gamma, 1.0, 1e-9) << b.lower;
        EXPECT_NEAR(b.delta, 0.0, 1e-9) << b.lower;
    }
    EXPECT_NEAR(i_divergence(d), 0.0, 1e-9);
}

TEST(MredCalibrate, ReproducesConstraints) {
    for (const auto& strikes : {std::vector<double>{100}, std::vector<double>{60, 100, 140},
                                std::vector<double>{60, 80, 100, 120, 140}}) {
        const auto base = flat_market({60, 80, 100, 120, 140});
        const auto slice = base.subset(strikes);
        const auto d = mred_calibrate(slice, kPrior20);
        for (std::size_t i = 0; i < slice.size(); ++i) {
            const double k_i = slice.strikes()[i];
            EXPECT_NEAR(mred_price_call(d, k_i) / slice.calls()[i], 1.0, 1e-6) << k_i;
            EXPECT_NEAR(mred_price_digital(d, k_i), slice.digitals()[i], 1e-6) << k_i;
            EXPECT_GT(d.buckets()[i].gamma, 0.0);
        }
    }
}

TEST(MredCalibrate, MassAndMeanByQuadrature) {
    const auto d = mred_calibrate(flat_market({60, 100, 140}), kPrior20);
    EXPECT_NEAR(integrate_h(d, [](double) { return 1.0; }), 1.0, 1e-8);
    EXPECT_NEAR(integrate_h(d, [](double x) { return x; }), 100.0, 1e-8 * 100.0);
}

TEST(MredCalibrate, DivergenceClosedFormMatchesQuadrature) {
    const auto d = mred_calibrate(flat_market({60, 100, 140}), kPrior20);
    const double q = integrate_h(d, [&](double x) {
        const auto& b = d.buckets()[d.bucket_index(x)];
        return std::log(b.gamma) + b.delta * x;
    });
    EXPECT_NEAR(i_divergence(d), q, 1e-8);
    EXPECT_GT(i_divergence(d), 0.0);
}

TEST(MredCalibrate, DivergenceGrowsWithConstraints) {
    const auto base = flat_market({60, 80, 100, 120, 140});
    const std::vector<double> s1{100};
    const std::vector<double> s3{60, 100, 140};
    const double d1 = i_divergence(mred_calibrate(base.subset(s1), kPrior20));
    const double d3 = i_divergence(mred_calibrate(base.subset(s3), kPrior20));
    const double d5 = i_divergence(mred_calibrate(base, kPrior20));
    EXPECT_LT(d1, d3);
    EXPECT_LT(d3, d5);
}

TEST(MredCalibrate, TruncationIsConfigurable) {
    MredOptions narrow;
    narrow.truncation_sd = 6.0;
    const auto slice = flat_market({100});
    const auto a = mred_calibrate(slice, kPrior20);
    const auto b = mred_calibrate(slice, kPrior20, narrow);
    EXPECT_LT(b.upper_limit(), a.upper_limit());
    EXPECT_NEAR(a.buckets()[1].delta, b.buckets()[1].delta, 1e-6);
}

TEST(MredCalibrate, RejectsBadPrior) {
    EXPECT_THROW(mred_calibrate(flat_market({100}), LogNormalPrior{100.0, 0.0, 1.0}), DomainError);
}

TEST(MredMedPrior, PriorEqualToTargetGivesIdentityTilt) {
    const auto slice = flat_market({60, 100, 140});
    const MedDensity prior = calibrate(slice);
    const auto d = mred_calibrate_med_prior(slice, prior);
    for (const auto& b : d.buckets()) {
        EXPECT_NEAR(b.gamma, 1.0, 1e-12);
        EXPECT_NEAR(b.delta, 0.0, 1e-14);
    }
}

TEST(MredMedPrior, ExponentialPriorCombinesToTargetMed) {
    const auto target = flat_market({100});
    const MedDensity prior = calibrate(MaturitySlice(1.0, 1.0, {0.0}, {100.0}, {1.0}));
    const auto d = mred_calibrate_med_prior(target, prior);
    const MedDensity med = calibrate(target);
    for (double x : {1.0, 50.0, 99.0, 100.0, 150.0, 300.0}) {
        EXPECT_NEAR(mred_pdf(d, x) / pdf(med, x), 1.0, 1e-12) << x;
    }
    EXPECT_NEAR(d.buckets()[0].delta, med.buckets()[0].beta - prior.buckets()[0].beta, 1e-15);
}

TEST(MredMedPrior, PricesMatchAnalyticMed) {
    const auto target = flat_market({60, 100, 140});
    const MedDensity prior = calibrate(flat_market({100}));
    const auto d = mred_calibrate_med_prior(target, prior);
    const MedDensity med = calibrate(target);
    for (double k : {0.0, 30.0, 60.0, 85.0, 100.0, 120.0, 140.0, 200.0}) {
        EXPECT_NEAR(mred_price_call(d, k), price_call(med, k), 1e-8) << k;
        EXPECT_NEAR(mred_price_digital(d, k), price_digital(med, k), 1e-8) << k;
    }
}

TEST(MredMedPrior, PriorWithExtraBoundariesSolvedNumerically) {
    const auto target = flat_market({100});
    const MedDensity prior = calibrate(flat_market({60, 100, 140}, 100.0, 0.20));
    const auto d = mred_calibrate_med_prior(target, prior);
    for (std::size_t i = 0; i < target.size(); ++i) {
        const double k = target.strikes()[i];
        EXPECT_NEAR(mred_price_call(d, k) / target.calls()[i], 1.0, 1e-8);
        EXPECT_NEAR(mred_price_digital(d, k), target.digitals()[i], 1e-9);
    }
    EXPECT_GT(i_divergence(d), 0.0);
}

TEST(Rebucket, RefinementKeepsDensity) {
    const MedDensity d = calibrate(flat_market({100}));
    const std::vector<double> extra{60.0, 100.0, -5.0};
    const MedDensity r = rebucket(d, extra);
    EXPECT_EQ(r.slice().strikes(), (std::vector<double>{0.0, 60.0, 100.0}));
    for (double x : {0.5, 30.0, 59.9, 60.0, 75.0, 100.0, 180.0}) {
        EXPECT_NEAR(pdf(r, x) / pdf(d, x), 1.0, 1e-13) << x;
        EXPECT_NEAR(price_call(r, x), price_call(d, x), 1e-11) << x;
    }
    EXPECT_NEAR(entropy(r), entropy(d), 1e-12);
}
