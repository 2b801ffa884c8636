#pragma once

#include "maxent/errors.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace maxent {

/// Absolute margin by which the strict slice inequalities must hold.
inline constexpr double kDefaultValidationSlack = 1e-12;

/// One row of a quote file. Prices are discounted, as quoted.
struct RawQuote {
    double strike = 0.0;
    std::optional<double> call_bid;
    std::optional<double> call_ask;
    std::optional<double> digital_bid;
    std::optional<double> digital_ask;

    std::optional<double> call_mid() const;
    std::optional<double> digital_mid() const;
};

/// Undiscounted call and digital prices at one maturity.
///
/// Index 0 is the synthetic strike K = 0 carrying the forward (call) and unit
/// mass (digital). The sentinel K_{n+1} = +inf with zero prices is implicit.
class MaturitySlice {
public:
    MaturitySlice(double maturity,
                  double discount_factor,
                  std::vector<double> strikes,
                  std::vector<double> calls,
                  std::vector<double> digitals);

    double maturity() const noexcept { return maturity_; }
    double discount_factor() const noexcept { return discount_factor_; }
    double forward() const noexcept { return calls_.front(); }

    const std::vector<double>& strikes() const noexcept { return strikes_; }
    const std::vector<double>& calls() const noexcept { return calls_; }
    const std::vector<double>& digitals() const noexcept { return digitals_; }

    /// Number of strikes including K_0; the last bucket index is size() - 1.
    std::size_t size() const noexcept { return strikes_.size(); }
    std::size_t last() const noexcept { return strikes_.size() - 1; }

    /// D_i - D_{i+1}: probability mass of bucket i.
    double bucket_mass(std::size_t i) const;
    /// (C_i + K_i D_i) - (C_{i+1} + K_{i+1} D_{i+1}): first moment of bucket i.
    double bucket_first_moment(std::size_t i) const;
    /// First moment over mass; lies strictly inside the bucket when arbitrage free.
    double bucket_mean(std::size_t i) const;

    /// Copy keeping K_0 and the given strikes (which must all be present).
    MaturitySlice subset(std::span<const double> keep) const;

private:
    double maturity_;
    double discount_factor_;
    std::vector<double> strikes_;
    std::vector<double> calls_;
    std::vector<double> digitals_;
};

/// Every violated invariant, each tagged with its bucket index. Empty when valid.
std::vector<Violation> validate_slice(const MaturitySlice& slice,
                                      double slack = kDefaultValidationSlack);

/// Mid prices divided by the discount factor with K_0 = 0 prepended.
///
/// A quote at K = 0 supplies the forward when `forward` is empty; an explicit
/// forward takes precedence. Quotes without a digital side are rejected.
/// Throws ValidationError when the resulting slice is not arbitrage free.
MaturitySlice build_slice(std::span<const RawQuote> quotes,
                          double discount_factor,
                          double maturity,
                          std::optional<double> forward,
                          double slack = kDefaultValidationSlack);

/// Symmetric call-spread estimate -(C_{i+1} - C_{i-1}) / (K_{i+1} - K_{i-1}) at
/// strike index i. Throws BoundaryStrike for the first and last index.
double call_spread_digital(std::span<const double> strikes,
                           std::span<const double> calls,
                           std::size_t i);

/// Call-spread digitals at every interior strike (indices 1 .. size-2).
std::vector<double> digitals_from_call_spreads(std::span<const double> strikes,
                                               std::span<const double> calls);

/// Fill the digital side of each quote at `targets` from the call mids at K -/+ width.
/// The returned quotes keep only the target strikes (plus a K = 0 row if present).
std::vector<RawQuote> with_spread_digitals(std::span<const RawQuote> quotes,
                                           std::span<const double> targets,
                                           double width);

} // namespace maxent
