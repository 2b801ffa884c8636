#include "maxent/med_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace maxent {

namespace {

// B_{2k} / (2k)! for k = 1..10: standard_theta(x) = 1/2 + sum_k c_k x^{2k-1}, |x| < 2 pi.
constexpr std::array<double, 10> kThetaSeries = {
    8.333333333333333e-02, -1.388888888888889e-03, 3.306878306878307e-05,  -8.267195767195768e-07,
    2.08767569878681e-08,  -5.284190138687493e-10, 1.3382536530684679e-11, -3.3896802963225827e-13,
    8.586062056277845e-15, -2.174868698558062e-16,
};

constexpr double kSeriesRadius = 1.0;
constexpr double kMaxExponent = 745.0;
constexpr double kFlatBucket = 1e-9;

double theta_series(double x) {
    const double x2 = x * x;
    double sum = 0.0;
    for (std::size_t k = kThetaSeries.size(); k-- > 0;) {
        sum = sum * x2 + kThetaSeries[k];
    }
    return 0.5 + x * sum;
}

double theta_prime_series(double x) {
    const double x2 = x * x;
    double sum = 0.0;
    for (std::size_t k = kThetaSeries.size(); k-- > 1;) {
        sum = sum * x2 + static_cast<double>(2 * k + 1) * kThetaSeries[k];
    }
    return kThetaSeries[0] + x2 * sum;
}

// x / expm1(x), the ratio turning bucket mass into edge density.
double x_over_expm1(double x) {
    if (x == 0.0) {
        return 1.0;
    }
    if (std::abs(x) < 1e-8) {
        return 1.0 - 0.5 * x;
    }
    return x / std::expm1(x);
}

} // namespace

double standard_theta(double x) {
    if (std::abs(x) < kSeriesRadius) {
        return theta_series(x);
    }
    const double a = std::min(std::abs(x), kMaxExponent);
    // 1 / (1 - e^{-a}) - 1 / a for the positive branch; F(-x) = 1 - F(x).
    const double positive = -1.0 / std::expm1(-a) - 1.0 / std::abs(x);
    return x > 0.0 ? positive : 1.0 - positive;
}

double standard_theta_prime(double x) {
    if (std::abs(x) < kSeriesRadius) {
        return theta_prime_series(x);
    }
    const double a = std::abs(x);
    const double e = std::exp(-std::min(a, kMaxExponent));
    const double denom = -std::expm1(-std::min(a, kMaxExponent));
    return 1.0 / (a * a) - e / (denom * denom);
}

double invert_standard_theta(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw DomainError("standard_theta inverse needs lambda in (0,1), got " + std::to_string(lambda));
    }
    // F(x) ~ -1/x as x -> -inf and 1 - 1/x as x -> +inf.
    double lo = -2.0 / lambda - 1.0;
    double hi = 2.0 / (1.0 - lambda) + 1.0;
    while (standard_theta(lo) > lambda) {
        lo *= 2.0;
    }
    while (standard_theta(hi) < lambda) {
        hi *= 2.0;
    }

    double x = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
        const double r = standard_theta(x) - lambda;
        if (r == 0.0) {
            return x;
        }
        (r < 0.0 ? lo : hi) = x;
        double next = x - r / standard_theta_prime(x);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        const double step = std::abs(next - x);
        x = next;
        if (step <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
            break;
        }
    }
    if (std::abs(standard_theta(x) - lambda) <= 1e-13) {
        return x;
    }
    // Plain bisection on whatever bracket Newton left behind.
    while (hi - lo > 1e-12 * std::max(1.0, std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        (standard_theta(mid) < lambda ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

MedDensity::MedDensity(MaturitySlice slice, std::vector<BucketParams> buckets)
    : slice_(std::move(slice)), buckets_(std::move(buckets)) {
    if (buckets_.size() != slice_.size()) {
        throw DomainError("one bucket per strike required");
    }
}

std::size_t MedDensity::bucket_index(double x) const {
    const auto& k = slice_.strikes();
    const auto it = std::upper_bound(k.begin(), k.end(), x);
    return it == k.begin() ? 0 : static_cast<std::size_t>(it - k.begin()) - 1;
}

BucketParams solve_bucket(const MaturitySlice& slice, std::size_t i) {
    if (i >= slice.last()) {
        throw DomainError("solve_bucket is for interior buckets; use solve_last_bucket");
    }
    const double lower = slice.strikes()[i];
    const double upper = slice.strikes()[i + 1];
    const double width = upper - lower;
    const double mass = slice.bucket_mass(i);
    const double moment = slice.bucket_first_moment(i);
    if (!(mass > 0.0) || !(width > 0.0)) {
        throw ArbitrageError(i, "non-positive bucket mass or width");
    }
    const double lambda = (moment - lower * mass) / (width * mass);
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw ArbitrageError(i, "bucket mean outside (K_i, K_i+1), lambda = " + std::to_string(lambda));
    }

    const double x = lambda == 0.5 ? 0.0 : invert_standard_theta(lambda);
    BucketParams b;
    b.lower = lower;
    b.upper = upper;
    if (std::abs(x) < kFlatBucket) {
        b.beta = 0.0;
        b.edge_density = mass / width;
        b.alpha = b.edge_density;
    } else {
        b.beta = x / width;
        b.edge_density = mass / width * x_over_expm1(x);
        b.alpha = b.edge_density * std::exp(-b.beta * lower);
    }
    return b;
}

BucketParams solve_last_bucket(const MaturitySlice& slice) {
    const std::size_t n = slice.last();
    const double call = slice.calls()[n];
    const double digital = slice.digitals()[n];
    if (!(call > 0.0) || !(digital > 0.0)) {
        throw ArbitrageError(n, "last bucket needs positive call and digital");
    }
    BucketParams b;
    b.lower = slice.strikes()[n];
    b.upper = std::numeric_limits<double>::infinity();
    b.beta = -digital / call;
    b.edge_density = -b.beta * digital;
    b.alpha = b.edge_density * std::exp(-b.beta * b.lower);
    return b;
}

MedDensity calibrate(const MaturitySlice& slice) {
    std::vector<BucketParams> buckets(slice.size());
    for (std::size_t i = 0; i < slice.last(); ++i) {
        buckets[i] = solve_bucket(slice, i);
    }
    buckets.back() = solve_last_bucket(slice);
    return MedDensity(slice, std::move(buckets));
}

double bucket_entropy(const BucketParams& bucket, double mass, double first_moment) {
    // -m ln(alpha) - beta s, written around the bucket edge so alpha never over/underflows.
    return -mass * std::log(bucket.edge_density) - bucket.beta * (first_moment - bucket.lower * mass);
}

double entropy(const MedDensity& density) {
    const auto& s = density.slice();
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        total += bucket_entropy(density.buckets()[i], s.bucket_mass(i), s.bucket_first_moment(i));
    }
    return total;
}

} // namespace maxent
