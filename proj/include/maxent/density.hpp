#pragma once

#include "maxent/med_solver.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace maxent {

/// Probability level in [0, 1) for inverse-CDF evaluation.
class Quantile {
public:
    explicit Quantile(double level);
    double value() const noexcept { return level_; }

private:
    double level_;
};

// Analytic evaluation of a calibrated MED. Prices are undiscounted.

double pdf(const MedDensity& density, double x);
double cdf(const MedDensity& density, double strike);
double inverse_cdf(const MedDensity& density, Quantile level);

double price_digital(const MedDensity& density, double strike);
double price_call(const MedDensity& density, double strike);

/// Spot delta of the discounted call, DF (C(K) + K D(K)) / S, evaluated from
/// the bucket's first moment rather than from the two prices.
double spot_delta(const MedDensity& density, double strike, double spot, double discount_factor);

/// Spot delta with the spot replaced by the forward.
double forward_delta(const MedDensity& density, double strike, double discount_factor);

/// Uniform source for sampling: the 53 high bits of std::mt19937_64 scaled to
/// [0, 1). Fully specified by the standard, so draws reproduce across platforms.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// Inverse-CDF draws; the same seed yields the same sequence.
std::vector<double> sample(const MedDensity& density, std::size_t count, std::uint64_t seed);
std::vector<double> sample(const MedDensity& density, std::size_t count, UniformSource& source);

} // namespace maxent
