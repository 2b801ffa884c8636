#pragma once

#include "maxent/med_solver.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace maxent {

/// Implied volatilities on maturities x strikes; an empty cell marks a strike
/// where inversion failed.
struct VolGrid {
    std::vector<double> maturities;
    std::vector<double> strikes;
    std::vector<std::vector<std::optional<double>>> vols; ///< [maturity][strike]
};

/// Implied vol of the MED call price at each strike; failures stay empty.
std::vector<std::optional<double>> smile(const MedDensity& density, std::span<const double> strikes, double maturity);

/// `points` log-spaced strikes with K/F from `low` to `high` inclusive.
std::vector<double> log_moneyness_grid(double forward, double low = 0.5, double high = 2.0, std::size_t points = 31);

/// One-strike MED at K = F per maturity, calibrated to the flat-vol ATM call
/// and digital, then read back as a smile on `strikes`.
VolGrid atm_surface(double forward, std::span<const double> sigma_atm, std::span<const double> maturities,
                    std::span<const double> strikes);

/// Constant ATM vol across maturities.
VolGrid atm_surface(double forward, double sigma_atm, std::span<const double> maturities,
                    std::span<const double> strikes);

} // namespace maxent
