#include "maxent/bs.hpp"

#include "maxent/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace maxent {

namespace {

constexpr double kVolLow = 1e-6;
constexpr double kVolHigh = 5.0;
constexpr double kPriceTolerance = 1e-10;

} // namespace

void BsParams::check() const {
    if (!(forward > 0.0 && vol > 0.0 && maturity > 0.0 && discount_factor > 0.0 && discount_factor <= 1.0)) {
        throw DomainError("Black-Scholes parameters need F>0, vol>0, T>0, DF in (0,1]");
    }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double bs_call(const BsParams& p, double strike) {
    p.check();
    if (strike <= 0.0) {
        return p.forward - strike;
    }
    const double sd = p.vol * std::sqrt(p.maturity);
    const double d1 = (std::log(p.forward / strike) + 0.5 * sd * sd) / sd;
    const double d2 = d1 - sd;
    return p.forward * normal_cdf(d1) - strike * normal_cdf(d2);
}

double bs_digital(const BsParams& p, double strike) {
    p.check();
    if (strike <= 0.0) {
        return 1.0;
    }
    const double sd = p.vol * std::sqrt(p.maturity);
    const double d2 = (std::log(p.forward / strike) - 0.5 * sd * sd) / sd;
    return normal_cdf(d2);
}

double implied_vol(double price, double forward, double strike, double maturity) {
    if (!(strike > 0.0 && forward > 0.0 && maturity > 0.0)) {
        throw DomainError("implied_vol needs positive strike, forward and maturity");
    }
    const double intrinsic = std::max(forward - strike, 0.0);
    if (!(price > intrinsic && price < forward)) {
        throw OutOfRange("call price " + std::to_string(price) + " outside (" + std::to_string(intrinsic) + ", " +
                         std::to_string(forward) + ") at strike " + std::to_string(strike));
    }
    auto gap = [&](double vol) { return bs_call({forward, vol, maturity, 1.0}, strike) - price; };

    double lo = kVolLow;
    double hi = kVolHigh;
    if (gap(lo) > kPriceTolerance || gap(hi) < -kPriceTolerance) {
        throw OutOfRange("call price " + std::to_string(price) + " not attainable for vol in [1e-6, 5] at strike " +
                         std::to_string(strike));
    }
    // Bisect to a few ulps; a price-gap stop alone loses the vol where vega is tiny.
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++iter) {
        mid = 0.5 * (lo + hi);
        const double g = gap(mid);
        if (g == 0.0) {
            break;
        }
        (g < 0.0 ? lo : hi) = mid;
    }
    return mid;
}

} // namespace maxent
