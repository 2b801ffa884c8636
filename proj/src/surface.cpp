#include "maxent/surface.hpp"

#include "maxent/bs.hpp"
#include "maxent/density.hpp"
#include "maxent/errors.hpp"

#include <cmath>

namespace maxent {

std::vector<std::optional<double>> smile(const MedDensity& density, std::span<const double> strikes, double maturity) {
    std::vector<std::optional<double>> vols;
    vols.reserve(strikes.size());
    for (double k : strikes) {
        try {
            vols.emplace_back(implied_vol(price_call(density, k), density.forward(), k, maturity));
        } catch (const Error&) {
            vols.emplace_back(std::nullopt);
        }
    }
    return vols;
}

std::vector<double> log_moneyness_grid(double forward, double low, double high, std::size_t points) {
    if (!(forward > 0.0 && low > 0.0 && high > low && points >= 2)) {
        throw DomainError("moneyness grid needs F > 0, 0 < low < high and at least two points");
    }
    std::vector<double> grid(points);
    const double step = std::log(high / low) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = forward * low * std::exp(step * static_cast<double>(i));
    }
    grid.back() = forward * high;
    return grid;
}

VolGrid atm_surface(double forward, std::span<const double> sigma_atm, std::span<const double> maturities,
                    std::span<const double> strikes) {
    if (sigma_atm.size() != maturities.size()) {
        throw DomainError("one ATM vol per maturity required");
    }
    VolGrid grid{{maturities.begin(), maturities.end()}, {strikes.begin(), strikes.end()}, {}};
    for (std::size_t t = 0; t < maturities.size(); ++t) {
        if (t > 0 && !(maturities[t] > maturities[t - 1])) {
            throw DomainError("maturities must increase");
        }
        const BsParams p{forward, sigma_atm[t], maturities[t], 1.0};
        p.check();
        const MaturitySlice slice(maturities[t], 1.0, {0.0, forward}, {forward, bs_call(p, forward)},
                                  {1.0, bs_digital(p, forward)});
        grid.vols.push_back(smile(calibrate(slice), strikes, maturities[t]));
    }
    return grid;
}

VolGrid atm_surface(double forward, double sigma_atm, std::span<const double> maturities,
                    std::span<const double> strikes) {
    const std::vector<double> curve(maturities.size(), sigma_atm);
    return atm_surface(forward, curve, maturities, strikes);
}

} // namespace maxent
