#include "maxent/density.hpp"

#include "exp_moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace maxent {

namespace {

constexpr double kFlatBucket = 1e-9;

bool is_flat(const BucketParams& b) { return std::abs(b.beta) * (b.upper - b.lower) < kFlatBucket; }

bool is_last(const MedDensity& d, std::size_t i) { return i + 1 == d.buckets().size(); }

void require_nonnegative(double strike, const char* what) {
    if (!(strike >= 0.0)) {
        throw DomainError(std::string(what) + " needs a non-negative strike, got " + std::to_string(strike));
    }
}

// \int_{K_i}^{K} g, for K inside bucket i.
double partial_mass(const BucketParams& b, double strike) {
    const double u = strike - b.lower;
    if (is_flat(b)) {
        return b.edge_density * u;
    }
    return b.edge_density * u * detail::exp_moment(0, b.beta * u);
}

} // namespace

Quantile::Quantile(double level) : level_(level) {
    if (!(level >= 0.0 && level < 1.0)) {
        throw DomainError("quantile level must lie in [0,1), got " + std::to_string(level));
    }
}

double pdf(const MedDensity& density, double x) {
    if (x < 0.0) {
        return 0.0;
    }
    const auto& b = density.buckets()[density.bucket_index(x)];
    return b.edge_density * std::exp(b.beta * (x - b.lower));
}

double cdf(const MedDensity& density, double strike) {
    if (strike <= 0.0) {
        return 0.0;
    }
    return 1.0 - price_digital(density, strike);
}

double price_digital(const MedDensity& density, double strike) {
    require_nonnegative(strike, "price_digital");
    const std::size_t i = density.bucket_index(strike);
    const auto& b = density.buckets()[i];
    const double di = density.slice().digitals()[i];
    if (is_last(density, i)) {
        return di * std::exp(b.beta * (strike - b.lower));
    }
    return di - partial_mass(b, strike);
}

double price_call(const MedDensity& density, double strike) {
    require_nonnegative(strike, "price_call");
    const std::size_t i = density.bucket_index(strike);
    const auto& b = density.buckets()[i];
    const double ci = density.slice().calls()[i];
    const double di = density.slice().digitals()[i];
    const double u = strike - b.lower;
    if (is_last(density, i)) {
        return ci * std::exp(b.beta * u);
    }
    if (is_flat(b)) {
        return ci - u * di + 0.5 * b.edge_density * u * u;
    }
    return ci - u * di + b.edge_density * u * u * detail::exp_tail_weight(b.beta * u);
}

double spot_delta(const MedDensity& density, double strike, double spot, double discount_factor) {
    require_nonnegative(strike, "spot_delta");
    if (!(spot > 0.0)) {
        throw DomainError("spot must be positive");
    }
    const std::size_t i = density.bucket_index(strike);
    const auto& b = density.buckets()[i];
    const double ci = density.slice().calls()[i];
    const double di = density.slice().digitals()[i];
    const double u = strike - b.lower;
    double upper_moment = 0.0; // \int_K^inf x g(x) dx
    if (is_last(density, i)) {
        upper_moment = std::exp(b.beta * u) * (ci + strike * di);
    } else {
        double lower_moment = 0.0; // \int_{K_i}^K x g(x) dx
        if (is_flat(b)) {
            lower_moment = 0.5 * b.edge_density * (strike * strike - b.lower * b.lower);
        } else {
            lower_moment = b.lower * partial_mass(b, strike) + b.edge_density * u * u * detail::exp_moment(1, b.beta * u);
        }
        upper_moment = ci + b.lower * di - lower_moment;
    }
    return discount_factor / spot * upper_moment;
}

double forward_delta(const MedDensity& density, double strike, double discount_factor) {
    return spot_delta(density, strike, density.forward(), discount_factor);
}

double inverse_cdf(const MedDensity& density, Quantile level) {
    const double survival = 1.0 - level.value();
    const auto& digitals = density.slice().digitals();
    // Largest i with D_i >= 1 - L; digitals are strictly decreasing.
    const auto it = std::partition_point(digitals.begin(), digitals.end(), [&](double d) { return d >= survival; });
    const std::size_t i = static_cast<std::size_t>(it - digitals.begin()) - 1;
    const auto& b = density.buckets()[i];
    if (is_last(density, i)) {
        return b.lower + std::log(survival / digitals[i]) / b.beta;
    }
    const double excess = digitals[i] - survival; // mass to cover inside bucket i
    if (is_flat(b)) {
        return b.lower + excess / b.edge_density;
    }
    return b.lower + std::log1p(b.beta * excess / b.edge_density) / b.beta;
}

std::vector<double> sample(const MedDensity& density, std::size_t count, UniformSource& source) {
    std::vector<double> draws;
    draws.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        draws.push_back(inverse_cdf(density, Quantile(source.next())));
    }
    return draws;
}

std::vector<double> sample(const MedDensity& density, std::size_t count, std::uint64_t seed) {
    UniformSource source(seed);
    return sample(density, count, source);
}

} // namespace maxent
