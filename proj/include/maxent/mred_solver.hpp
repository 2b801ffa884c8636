#pragma once

#include "maxent/med_solver.hpp"
#include "maxent/quotes.hpp"

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace maxent {

/// Log-normal density of the asset at maturity with mean equal to the forward.
struct LogNormalPrior {
    double forward = 0.0;
    double sigma = 0.0;
    double maturity = 0.0;

    /// -inf for x <= 0.
    double log_pdf(double x) const;
};

using Prior = std::variant<LogNormalPrior, MedDensity>;

double prior_pdf(const Prior& prior, double x);

/// Tilt gamma * exp(delta * x) applied to the prior on [lower, upper).
struct TiltBucket {
    double lower = 0.0;
    double upper = 0.0;
    double gamma = 1.0;
    double delta = 0.0;
};

struct MredOptions {
    /// The last bucket of a log-normal prior is integrated up to
    /// max(F, K_n) * exp(truncation_sd * sigma * sqrt(T)).
    double truncation_sd = 10.0;
    /// Per-bucket stop: |mean - target mean| <= tolerance * bucket scale.
    double tolerance = 1e-12;
    /// Relative tolerance of each adaptive quadrature.
    double quadrature_tolerance = 1e-10;
    int max_iterations = 200;
};

/// Prior density times a piecewise-exponential tilt, one tilt per slice bucket.
class MredDensity {
public:
    MredDensity(MaturitySlice slice, Prior prior, std::vector<TiltBucket> buckets, double upper_limit,
                double quadrature_tolerance = 1e-10);

    const MaturitySlice& slice() const noexcept { return slice_; }
    const Prior& prior() const noexcept { return prior_; }
    const std::vector<TiltBucket>& buckets() const noexcept { return buckets_; }
    /// Right end of the support used for integration (+inf for MED priors).
    double upper_limit() const noexcept { return upper_limit_; }
    double quadrature_tolerance() const noexcept { return quadrature_tolerance_; }

    std::size_t bucket_index(double x) const;

private:
    MaturitySlice slice_;
    Prior prior_;
    std::vector<TiltBucket> buckets_;
    double upper_limit_;
    double quadrature_tolerance_;
};

/// Per-bucket 2-D solve for (gamma_i, delta_i) with quadrature moments.
/// Throws NonConvergence carrying the bucket index in its message.
MredDensity mred_calibrate(const MaturitySlice& slice, const LogNormalPrior& prior, const MredOptions& options = {});

/// MED prior. When every prior boundary is a slice strike the tilt follows
/// analytically from the slice's own MED; otherwise each bucket is solved
/// numerically against the piecewise-exponential prior.
MredDensity mred_calibrate_med_prior(const MaturitySlice& slice, const MedDensity& prior,
                                     const MredOptions& options = {});

/// Same density on the union of its own boundaries and `boundaries` (values
/// outside (0, inf) or already present are ignored).
MedDensity rebucket(const MedDensity& density, std::span<const double> boundaries);

double mred_pdf(const MredDensity& density, double x);
double mred_price_call(const MredDensity& density, double strike);
double mred_price_digital(const MredDensity& density, double strike);

/// \int h ln(h / p), in closed form sum_i (m_i ln gamma_i + delta_i s_i) from the
/// bucket masses m_i and first moments s_i.
double i_divergence(const MredDensity& density);

} // namespace maxent
