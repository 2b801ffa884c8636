#include "maxent/quotes.hpp"

#include "support/tables.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace maxent;

namespace {

RawQuote quote(double k, double c, std::optional<double> d) {
    RawQuote q;
    q.strike = k;
    q.call_bid = c;
    q.call_ask = c;
    q.digital_bid = d;
    q.digital_ask = d;
    return q;
}

bool mentions(const std::vector<Violation>& v, const std::string& text) {
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.what.find(text) != std::string::npos; });
}

} // namespace

TEST(RawQuote, MidFromAvailableSides) {
    RawQuote q;
    q.call_bid = 1.0;
    q.call_ask = 3.0;
    q.digital_ask = 0.4;
    EXPECT_DOUBLE_EQ(*q.call_mid(), 2.0);
    EXPECT_DOUBLE_EQ(*q.digital_mid(), 0.4);
    q.digital_ask.reset();
    EXPECT_FALSE(q.digital_mid().has_value());
}

TEST(BuildSlice, ForwardFromZeroStrikeQuote) {
    const std::vector<RawQuote> qs{quote(100, 9.9, 0.45), quote(0, 99.0, 0.99)};
    const auto s = build_slice(qs, 0.99, 1.0, std::nullopt);
    EXPECT_DOUBLE_EQ(s.forward(), 100.0);
    EXPECT_EQ(s.strikes(), (std::vector<double>{0.0, 100.0}));
    EXPECT_DOUBLE_EQ(s.calls()[1], 10.0);
    EXPECT_NEAR(s.digitals()[1], 0.45 / 0.99, 1e-15);
    EXPECT_DOUBLE_EQ(s.digitals()[0], 1.0);
}

TEST(BuildSlice, ExplicitForwardTakesPrecedence) {
    const std::vector<RawQuote> qs{quote(0, 99.0, 1.0), quote(100, 9.9, 0.45)};
    EXPECT_DOUBLE_EQ(build_slice(qs, 1.0, 1.0, 101.0).forward(), 101.0);
}

TEST(BuildSlice, MissingForward) {
    const std::vector<RawQuote> qs{quote(100, 9.9, 0.45)};
    EXPECT_THROW(build_slice(qs, 1.0, 1.0, std::nullopt), MissingForward);
}

TEST(BuildSlice, SortsUnorderedQuotes) {
    const std::vector<RawQuote> qs{quote(120, 3.7, 0.2), quote(80, 22.3, 0.78), quote(100, 9.95, 0.45)};
    const auto s = build_slice(qs, 1.0, 1.0, 100.0);
    EXPECT_EQ(s.strikes(), (std::vector<double>{0, 80, 100, 120}));
}

TEST(BuildSlice, RejectsCrossedQuotes) {
    RawQuote q = quote(100, 9.9, 0.45);
    q.call_bid = 10.0;
    const std::vector<RawQuote> qs{q};
    EXPECT_THROW(build_slice(qs, 1.0, 1.0, 100.0), ValidationError);
}

TEST(BuildSlice, RejectsMissingDigital) {
    const std::vector<RawQuote> qs{quote(100, 9.9, std::nullopt)};
    EXPECT_THROW(build_slice(qs, 1.0, 1.0, 100.0), ValidationError);
}

TEST(BuildSlice, ListsEveryViolation) {
    // Digital increases and the call curve is flat between 100 and 120.
    const std::vector<RawQuote> qs{quote(100, 9.9, 0.45), quote(120, 9.9, 0.5)};
    try {
        build_slice(qs, 1.0, 1.0, 100.0);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_TRUE(mentions(e.violations(), "digitals not strictly decreasing"));
        EXPECT_TRUE(mentions(e.violations(), "calls not strictly decreasing"));
        EXPECT_EQ(e.violations().front().bucket, 1u);
    }
}

TEST(ValidateSlice, BucketMeanMustBeInterior) {
    // Bucket [80, 100) with mean above 100.
    const MaturitySlice s(1.0, 1.0, {0.0, 80.0, 100.0}, {100.0, 21.0, 4.0}, {1.0, 0.8, 0.5});
    const auto v = validate_slice(s);
    ASSERT_FALSE(v.empty());
    EXPECT_TRUE(mentions(v, "bucket mean not interior"));
    EXPECT_EQ(v.front().bucket, 1u);
}

TEST(ValidateSlice, SlackDemandsMargin) {
    // Digitals differ by 1e-13: fine without slack, rejected with the default.
    const MaturitySlice s(1.0, 1.0, {0.0, 100.0, 100.5}, {100.0, 9.0, 8.8}, {1.0, 0.4, 0.4 - 1e-13});
    EXPECT_TRUE(mentions(validate_slice(s, kDefaultValidationSlack), "digitals not strictly decreasing"));
    EXPECT_FALSE(mentions(validate_slice(s, 0.0), "digitals not strictly decreasing"));
}

TEST(ValidateSlice, GlobalInvariants) {
    const MaturitySlice s(0.0, 1.2, {1.0, 100.0}, {100.0, 9.0}, {0.9, 0.4});
    const auto v = validate_slice(s);
    EXPECT_TRUE(mentions(v, "maturity"));
    EXPECT_TRUE(mentions(v, "discount factor"));
    EXPECT_TRUE(mentions(v, "K_0"));
    EXPECT_TRUE(mentions(v, "D_0"));
}

TEST(MaturitySlice, BucketQuantities) {
    const MaturitySlice s(1.0, 1.0, {0.0, 100.0}, {100.0, 10.0}, {1.0, 0.45});
    EXPECT_DOUBLE_EQ(s.bucket_mass(0), 0.55);
    EXPECT_DOUBLE_EQ(s.bucket_first_moment(0), 100.0 - 55.0);
    EXPECT_DOUBLE_EQ(s.bucket_mass(1), 0.45);
    EXPECT_DOUBLE_EQ(s.bucket_first_moment(1), 55.0);
    EXPECT_NEAR(s.bucket_mean(1), 55.0 / 0.45, 1e-12);
}

TEST(MaturitySlice, SubsetKeepsForward) {
    const MaturitySlice s(1.0, 1.0, {0.0, 80.0, 100.0, 120.0}, {100.0, 22.0, 10.0, 3.7}, {1.0, 0.78, 0.45, 0.2});
    const std::vector<double> keep{100.0};
    const auto t = s.subset(keep);
    EXPECT_EQ(t.strikes(), (std::vector<double>{0.0, 100.0}));
    EXPECT_DOUBLE_EQ(t.calls()[1], 10.0);
    const std::vector<double> missing{90.0};
    EXPECT_THROW(s.subset(missing), DomainError);
}

TEST(CallSpread, SymmetricDifference) {
    const std::vector<double> k{650, 700, 750};
    const std::vector<double> c{533.45, 484.75, 436.55};
    EXPECT_NEAR(call_spread_digital(k, c, 1), 0.969, 1e-12);
    EXPECT_THROW(call_spread_digital(k, c, 0), BoundaryStrike);
    EXPECT_THROW(call_spread_digital(k, c, 2), BoundaryStrike);
    EXPECT_EQ(digitals_from_call_spreads(k, c).size(), 1u);
}

TEST(CallSpread, SpreadDigitalsForDecemberStrikes) {
    std::vector<RawQuote> qs;
    for (const auto& r : maxent::testing::kDecember) {
        qs.push_back(quote(r.strike, r.market_call, std::nullopt));
    }
    const std::vector<double> targets{700, 1200, 1400};
    const auto out = with_spread_digitals(qs, targets, 50.0);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_NEAR(*out[0].digital_mid(), (533.45 - 436.55) / 100.0, 1e-12);
    EXPECT_NEAR(*out[1].digital_mid(), (95.60 - 42.70) / 100.0, 1e-12);
    EXPECT_NEAR(*out[2].digital_mid(), (13.35 - 2.68) / 100.0, 1e-12);
    const std::vector<double> edge{500};
    EXPECT_THROW(with_spread_digitals(qs, edge, 50.0), BoundaryStrike);
}
