#pragma once

#include "maxent/quotes.hpp"

#include <cstddef>
#include <vector>

namespace maxent {

/// Continuous extension of e^x/(e^x - 1) - 1/x with value 1/2 at the origin.
///
/// This is the mean of the density proportional to e^{x t} on t in [0, 1]; it
/// increases strictly from 0 (x -> -inf) to 1 (x -> +inf).
double standard_theta(double x);

/// Derivative of standard_theta; strictly positive, even, 1/12 at the origin.
double standard_theta_prime(double x);

/// Solves standard_theta(x) = lambda for lambda in (0, 1).
///
/// Newton from x = 0 with the analytic derivative; a step leaving the current
/// bracket is replaced by bisection. Throws DomainError outside (0, 1).
double invert_standard_theta(double lambda);

/// Exponential piece alpha * exp(beta * x) on [lower, upper).
struct BucketParams {
    double lower = 0.0;
    double upper = 0.0; ///< +inf for the last bucket
    double alpha = 0.0;
    double beta = 0.0;
    /// alpha * exp(beta * lower), kept separately so evaluation never forms
    /// exp(beta * x) for large x.
    double edge_density = 0.0;
};

/// Piecewise-exponential maximum entropy density calibrated to a slice.
class MedDensity {
public:
    MedDensity(MaturitySlice slice, std::vector<BucketParams> buckets);

    const MaturitySlice& slice() const noexcept { return slice_; }
    const std::vector<BucketParams>& buckets() const noexcept { return buckets_; }
    double forward() const noexcept { return slice_.forward(); }

    /// Index of the bucket containing x (right-open); x below 0 maps to bucket 0.
    std::size_t bucket_index(double x) const;

private:
    MaturitySlice slice_;
    std::vector<BucketParams> buckets_;
};

/// Interior bucket i < n, solved by inverting standard_theta.
BucketParams solve_bucket(const MaturitySlice& slice, std::size_t i);

/// Last bucket [K_n, inf): beta = -D_n / C_n.
BucketParams solve_last_bucket(const MaturitySlice& slice);

/// All buckets; errors carry the failing bucket index.
MedDensity calibrate(const MaturitySlice& slice);

/// -\int g ln g over one bucket from its mass and first moment.
double bucket_entropy(const BucketParams& bucket, double mass, double first_moment);

double entropy(const MedDensity& density);

} // namespace maxent
