#pragma once

namespace maxent {

/// Flat-volatility Black-Scholes market on the forward.
struct BsParams {
    double forward = 0.0;
    double vol = 0.0;
    double maturity = 0.0;
    double discount_factor = 1.0;

    /// Throws DomainError unless F > 0, vol > 0, T > 0 and DF in (0, 1].
    void check() const;
};

double normal_cdf(double x);

/// Undiscounted call F N(d1) - K N(d2); returns F at K = 0.
double bs_call(const BsParams& params, double strike);

/// Undiscounted digital N(d2) with no smile correction; 1 at K = 0.
double bs_digital(const BsParams& params, double strike);

/// Implied volatility of an undiscounted call by bisection on [1e-6, 5], run
/// until the bracket is a few ulps wide (so the price gap is far below 1e-10).
///
/// Throws OutOfRange unless max(F - K, 0) < price < F, or when the price lies
/// outside the prices spanned by the bisection interval.
double implied_vol(double price, double forward, double strike, double maturity);

} // namespace maxent
