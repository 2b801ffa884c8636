#include "maxent/mred_solver.hpp"

#include "maxent/density.hpp"
#include "maxent/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace maxent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr unsigned kMaxDepth = 25;
// Largest change of delta * (bucket scale) per Newton step.
constexpr double kMaxExponentStep = 5.0;

template <class F>
double integrate(F f, double a, double b, double tol) {
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, kMaxDepth, tol, &error);
}

double med_log_pdf(const MedDensity& d, double x) {
    if (x < 0.0) {
        return -kInf;
    }
    const auto& b = d.buckets()[d.bucket_index(x)];
    return std::log(b.edge_density) + b.beta * (x - b.lower);
}

double log_prior(const Prior& prior, double x) {
    if (const auto* ln = std::get_if<LogNormalPrior>(&prior)) {
        return ln->log_pdf(x);
    }
    return med_log_pdf(std::get<MedDensity>(prior), x);
}

// Prior kinks in (a, b), so that quadrature never straddles one.
std::vector<double> split_points(const Prior& prior, double a, double b) {
    std::vector<double> pts{a};
    if (const auto* med = std::get_if<MedDensity>(&prior)) {
        for (double k : med->slice().strikes()) {
            if (k > a && k < b) {
                pts.push_back(k);
            }
        }
    }
    pts.push_back(b);
    return pts;
}

template <class F>
double integrate_split(const Prior& prior, F f, double a, double b, double tol) {
    const auto pts = split_points(prior, a, b);
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
        total += integrate(f, pts[j], pts[j + 1], tol);
    }
    return total;
}

// Moments of e^{delta (x - c) - shift} p(x) about c on [a, b], orders 0..2.
struct TiltMoments {
    double shift = 0.0;
    double m0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
};

TiltMoments tilt_moments(const Prior& prior, double a, double b, double c, double delta, double tol) {
    // Shift by the largest log-integrand seen on a coarse grid; moments are only
    // used through ratios and the log of m0, so the shift cancels.
    double shift = -kInf;
    auto probe = [&](double x) {
        const double v = log_prior(prior, x) + delta * (x - c);
        if (std::isfinite(v)) {
            shift = std::max(shift, v);
        }
    };
    const double hi = std::isfinite(b) ? b : c + 10.0 * (c - a);
    for (int k = 0; k <= 64; ++k) {
        probe(a + (hi - a) * k / 64.0);
    }
    for (double p : split_points(prior, a, hi)) {
        probe(p);
    }
    if (!std::isfinite(shift)) {
        shift = 0.0;
    }
    TiltMoments out;
    out.shift = shift;
    auto weight = [&](double x) {
        const double v = log_prior(prior, x) + delta * (x - c) - shift;
        return std::isfinite(v) ? std::exp(v) : 0.0;
    };
    out.m0 = integrate_split(prior, weight, a, b, tol);
    out.m1 = integrate_split(prior, [&](double x) { return (x - c) * weight(x); }, a, b, tol);
    out.m2 = integrate_split(prior, [&](double x) { return (x - c) * (x - c) * weight(x); }, a, b, tol);
    return out;
}

// Mean condition first (it does not depend on gamma), then gamma from the mass.
TiltBucket solve_tilt(const Prior& prior, std::size_t index, double a, double b, double mass, double moment,
                      double delta_cap, const MredOptions& opt) {
    const double c = moment / mass;
    if (!(mass > 0.0 && c > a && c < b)) {
        throw ArbitrageError(index, "bucket mean " + std::to_string(c) + " outside (" + std::to_string(a) + ", " +
                                        std::to_string(b) + ")");
    }
    const double scale = std::isfinite(b) ? b - a : c - a;
    const double target = opt.tolerance * scale;

    double lo = -kInf;
    double hi = delta_cap;
    double delta = delta_cap > 0.0 ? 0.0 : delta_cap - 1.0 / scale;
    TiltMoments tm;
    double best = kInf;
    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        tm = tilt_moments(prior, a, b, c, delta, opt.quadrature_tolerance);
        const double mean = tm.m1 / tm.m0;
        const double var = tm.m2 / tm.m0 - mean * mean;
        if (!std::isfinite(mean) || !(tm.m0 > 0.0)) {
            throw NonConvergence("MRED bucket " + std::to_string(index) + ": prior has no mass", best);
        }
        best = std::min(best, std::abs(mean));
        if (std::abs(mean) <= target) {
            const double log_gamma = std::log(mass) - tm.shift - std::log(tm.m0) - delta * c;
            return {a, b, std::exp(log_gamma), delta};
        }
        (mean < 0.0 ? lo : hi) = delta;
        double next = delta;
        if (var > 0.0 && std::isfinite(var)) {
            double step = -mean / var;
            const double cap = kMaxExponentStep / scale;
            step = std::clamp(step, -cap, cap);
            next = delta + step;
        }
        if (!(next > lo && next < hi) || next == delta) {
            if (std::isfinite(lo) && std::isfinite(hi)) {
                next = 0.5 * (lo + hi);
            } else if (std::isfinite(lo)) {
                next = lo + kMaxExponentStep / scale;
            } else {
                next = hi - kMaxExponentStep / scale;
            }
            if (!(next > lo && next < hi)) {
                next = 0.5 * (lo + hi);
            }
        }
        if (next == delta) {
            break;
        }
        delta = next;
    }
    throw NonConvergence("MRED bucket " + std::to_string(index) + " did not converge", best);
}

double tilt_log(const TiltBucket& t, double x) { return std::log(t.gamma) + t.delta * x; }

bool knots_within(const MedDensity& prior, const std::vector<double>& strikes) {
    for (double k : prior.slice().strikes()) {
        if (!std::binary_search(strikes.begin(), strikes.end(), k)) {
            return false;
        }
    }
    return true;
}

} // namespace

double LogNormalPrior::log_pdf(double x) const {
    if (!(x > 0.0)) {
        return -kInf;
    }
    const double var = sigma * sigma * maturity;
    const double z = std::log(x / forward) + 0.5 * var;
    return -std::log(x) - 0.5 * std::log(2.0 * std::numbers::pi * var) - z * z / (2.0 * var);
}

double prior_pdf(const Prior& prior, double x) { return std::exp(log_prior(prior, x)); }

MredDensity::MredDensity(MaturitySlice slice, Prior prior, std::vector<TiltBucket> buckets, double upper_limit,
                         double quadrature_tolerance)
    : slice_(std::move(slice)),
      prior_(std::move(prior)),
      buckets_(std::move(buckets)),
      upper_limit_(upper_limit),
      quadrature_tolerance_(quadrature_tolerance) {
    if (buckets_.size() != slice_.size()) {
        throw DomainError("one tilt bucket per strike required");
    }
}

std::size_t MredDensity::bucket_index(double x) const {
    const auto& k = slice_.strikes();
    const auto it = std::upper_bound(k.begin(), k.end(), x);
    return it == k.begin() ? 0 : static_cast<std::size_t>(it - k.begin()) - 1;
}

MredDensity mred_calibrate(const MaturitySlice& slice, const LogNormalPrior& prior, const MredOptions& options) {
    if (!(prior.forward > 0.0 && prior.sigma > 0.0 && prior.maturity > 0.0)) {
        throw DomainError("log-normal prior needs F, sigma, T > 0");
    }
    const auto& k = slice.strikes();
    const double upper = std::max(prior.forward, k.back()) *
                         std::exp(options.truncation_sd * prior.sigma * std::sqrt(prior.maturity));
    const Prior p = prior;
    std::vector<TiltBucket> buckets;
    for (std::size_t i = 0; i < slice.size(); ++i) {
        const double b = i < slice.last() ? k[i + 1] : upper;
        buckets.push_back(solve_tilt(p, i, k[i], b, slice.bucket_mass(i), slice.bucket_first_moment(i), kInf, options));
    }
    return MredDensity(slice, p, std::move(buckets), upper, options.quadrature_tolerance);
}

MredDensity mred_calibrate_med_prior(const MaturitySlice& slice, const MedDensity& prior, const MredOptions& options) {
    const auto& k = slice.strikes();
    std::vector<TiltBucket> buckets;
    if (knots_within(prior, k)) {
        const MedDensity fine = rebucket(prior, k);
        const MedDensity target = calibrate(slice);
        for (std::size_t i = 0; i < slice.size(); ++i) {
            const auto& c = target.buckets()[i];
            const auto& p = fine.buckets()[i];
            const double delta = c.beta - p.beta;
            const double log_gamma = std::log(c.edge_density) - std::log(p.edge_density) - delta * c.lower;
            buckets.push_back({c.lower, c.upper, std::exp(log_gamma), delta});
        }
        return MredDensity(slice, fine, std::move(buckets), kInf, options.quadrature_tolerance);
    }
    const Prior p = prior;
    const double tail_beta = prior.buckets().back().beta;
    for (std::size_t i = 0; i < slice.size(); ++i) {
        const bool last = i == slice.last();
        const double b = last ? kInf : k[i + 1];
        // The tilted tail must still decay.
        const double cap = last ? -tail_beta : kInf;
        buckets.push_back(solve_tilt(p, i, k[i], b, slice.bucket_mass(i), slice.bucket_first_moment(i), cap, options));
    }
    return MredDensity(slice, p, std::move(buckets), kInf, options.quadrature_tolerance);
}

MedDensity rebucket(const MedDensity& density, std::span<const double> boundaries) {
    std::vector<double> strikes = density.slice().strikes();
    for (double b : boundaries) {
        if (b > 0.0 && std::isfinite(b)) {
            strikes.push_back(b);
        }
    }
    std::sort(strikes.begin(), strikes.end());
    strikes.erase(std::unique(strikes.begin(), strikes.end()), strikes.end());

    std::vector<double> calls;
    std::vector<double> digitals;
    std::vector<BucketParams> buckets;
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        const double s = strikes[i];
        const auto& b = density.buckets()[density.bucket_index(s)];
        calls.push_back(price_call(density, s));
        digitals.push_back(price_digital(density, s));
        const double upper = i + 1 < strikes.size() ? strikes[i + 1] : kInf;
        buckets.push_back({s, upper, b.alpha, b.beta, b.edge_density * std::exp(b.beta * (s - b.lower))});
    }
    const auto& sl = density.slice();
    return MedDensity(MaturitySlice(sl.maturity(), sl.discount_factor(), std::move(strikes), std::move(calls),
                                    std::move(digitals)),
                      std::move(buckets));
}

double mred_pdf(const MredDensity& density, double x) {
    if (x < 0.0 || x > density.upper_limit()) {
        return 0.0;
    }
    const auto& t = density.buckets()[density.bucket_index(x)];
    return std::exp(tilt_log(t, x) + log_prior(density.prior(), x));
}

namespace {

// \int_K^U payoff(x) h(x) dx, bucket by bucket.
template <class Payoff>
double integrate_above(const MredDensity& d, double strike, Payoff payoff) {
    if (!(strike >= 0.0)) {
        throw DomainError("MRED prices need a non-negative strike, got " + std::to_string(strike));
    }
    double total = 0.0;
    for (const auto& t : d.buckets()) {
        const double b = std::min(t.upper, d.upper_limit());
        const double a = std::max(t.lower, strike);
        if (!(b > a)) {
            continue;
        }
        auto f = [&](double x) {
            const double v = tilt_log(t, x) + log_prior(d.prior(), x);
            return std::isfinite(v) ? payoff(x) * std::exp(v) : 0.0;
        };
        total += integrate_split(d.prior(), f, a, b, d.quadrature_tolerance());
    }
    return total;
}

} // namespace

double mred_price_call(const MredDensity& density, double strike) {
    return integrate_above(density, strike, [strike](double x) { return x - strike; });
}

double mred_price_digital(const MredDensity& density, double strike) {
    return integrate_above(density, strike, [](double) { return 1.0; });
}

double i_divergence(const MredDensity& density) {
    const auto& s = density.slice();
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& t = density.buckets()[i];
        total += s.bucket_mass(i) * std::log(t.gamma) + t.delta * s.bucket_first_moment(i);
    }
    return total;
}

} // namespace maxent
