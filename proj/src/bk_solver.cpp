#include "maxent/bk_solver.hpp"

#include "maxent/errors.hpp"

#include "exp_moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace maxent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_strikes(std::span<const double> lambdas, std::span<const double> strikes) {
    if (strikes.empty() || strikes.size() != lambdas.size()) {
        throw DomainError("BK needs one multiplier per strike");
    }
    if (strikes[0] != 0.0) {
        throw DomainError("BK strikes must start at 0 (forward constraint)");
    }
    for (std::size_t i = 1; i < strikes.size(); ++i) {
        if (!(strikes[i] > strikes[i - 1])) {
            throw DomainError("BK strikes must be strictly increasing");
        }
    }
}

// \int (x - strike)^+ over pieces j >= from, where strike <= lower[from].
double call_moment(const BkMoments& m, std::size_t from, double strike) {
    double total = 0.0;
    for (std::size_t j = from; j < m.piece.size(); ++j) {
        total += (m.lower[j] - strike) * m.piece[j][0] + m.piece[j][1];
    }
    return total;
}

double normalizer(const BkMoments& m) {
    double z = 0.0;
    for (const auto& p : m.piece) {
        z += p[0];
    }
    return z;
}

double max_abs(const std::vector<double>& v) {
    double out = 0.0;
    for (double x : v) {
        out = std::max(out, std::abs(x));
    }
    return out;
}

double squared_norm(const std::vector<double>& v) {
    return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

std::vector<double> residuals(std::span<const double> lambdas, std::span<const double> strikes,
                              std::span<const double> calls) {
    auto r = bk_expected_calls(lambdas, strikes);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] -= calls[i];
    }
    return r;
}

// Convex dual log mu - sum lambda_i C_i; its gradient is the residual vector.
double dual(std::span<const double> lambdas, std::span<const double> strikes, std::span<const double> calls) {
    const BkMoments m = bk_moments(lambdas, strikes);
    double value = m.log_scale + std::log(normalizer(m));
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        value -= lambdas[i] * calls[i];
    }
    return value;
}

void check_calls(std::span<const double> strikes, std::span<const double> calls) {
    std::vector<Violation> bad;
    if (calls.size() != strikes.size()) {
        throw DomainError("BK needs one call price per strike");
    }
    for (std::size_t i = 0; i < calls.size(); ++i) {
        if (!(calls[i] > 0.0)) {
            bad.push_back({i, "call price must be positive"});
        }
    }
    // Slopes of the call curve must lie in (-1, 0) and increase strictly.
    double prev_slope = -1.0;
    for (std::size_t i = 1; i < calls.size(); ++i) {
        const double slope = (calls[i] - calls[i - 1]) / (strikes[i] - strikes[i - 1]);
        if (!(slope < 0.0)) {
            bad.push_back({i, "calls must decrease in strike"});
        }
        if (!(slope > prev_slope)) {
            bad.push_back({i, "call curve must be strictly convex"});
        }
        prev_slope = slope;
    }
    if (!bad.empty()) {
        throw ValidationError(std::move(bad));
    }
}

} // namespace

BkMoments bk_moments(std::span<const double> lambdas, std::span<const double> strikes) {
    check_strikes(lambdas, strikes);
    const std::size_t m = strikes.size();
    const double tail_slope = std::accumulate(lambdas.begin(), lambdas.end(), 0.0);
    if (!(tail_slope < 0.0)) {
        throw IntegrabilityError("BK multipliers sum to " + std::to_string(tail_slope) + ", tail not integrable");
    }

    BkMoments out;
    out.lower.assign(strikes.begin(), strikes.end());
    out.width.resize(m);
    out.slope.resize(m);
    out.piece.resize(m);

    // Exponent at each piece's left edge, and its maximum over the support.
    std::vector<double> edge(m);
    double slope = 0.0;
    double q = 0.0;
    double peak = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        slope += lambdas[j];
        edge[j] = q;
        out.slope[j] = slope;
        out.width[j] = j + 1 < m ? strikes[j + 1] - strikes[j] : kInf;
        if (j + 1 < m) {
            q += slope * out.width[j];
            peak = std::max(peak, q);
        }
        peak = std::max(peak, edge[j]);
    }
    out.log_scale = peak;

    for (std::size_t j = 0; j < m; ++j) {
        const double b = out.slope[j];
        const double shift = edge[j] - peak;
        if (j + 1 == m) {
            const double e = std::exp(shift);
            const double r = -1.0 / b;
            out.piece[j] = {e * r, e * r * r, 2.0 * e * r * r * r};
            continue;
        }
        const double w = out.width[j];
        for (int k = 0; k < 3; ++k) {
            out.piece[j][static_cast<std::size_t>(k)] = std::pow(w, k + 1) * detail::exp_moment(k, b * w, shift);
        }
    }
    return out;
}

std::vector<double> bk_expected_calls(std::span<const double> lambdas, std::span<const double> strikes) {
    const BkMoments m = bk_moments(lambdas, strikes);
    const double z = normalizer(m);
    std::vector<double> out(strikes.size());
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        out[i] = call_moment(m, i, strikes[i]) / z;
    }
    return out;
}

Eigen::MatrixXd bk_jacobian(std::span<const double> lambdas, std::span<const double> strikes) {
    const BkMoments m = bk_moments(lambdas, strikes);
    const std::size_t n = strikes.size();
    const double z = normalizer(m);
    std::vector<double> mean(n);
    for (std::size_t i = 0; i < n; ++i) {
        mean[i] = call_moment(m, i, strikes[i]) / z;
    }
    Eigen::MatrixXd jac(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i; k < n; ++k) {
            // Both payoffs are live on pieces j >= k.
            double second = 0.0;
            for (std::size_t j = k; j < n; ++j) {
                const double di = m.lower[j] - strikes[i];
                const double dk = m.lower[j] - strikes[k];
                const auto& p = m.piece[j];
                second += p[2] + (di + dk) * p[1] + di * dk * p[0];
            }
            const double cov = second / z - mean[i] * mean[k];
            jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = cov;
            jac(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = cov;
        }
    }
    return jac;
}

BkDensity::BkDensity(std::vector<double> strikes, std::vector<double> lambdas)
    : strikes_(std::move(strikes)), lambdas_(std::move(lambdas)) {
    const BkMoments m = bk_moments(lambdas_, strikes_);
    log_mu_ = m.log_scale + std::log(normalizer(m));
}

double BkDensity::mu() const { return std::exp(log_mu_); }

double BkDensity::forward() const { return bk_price_call(*this, 0.0); }

std::vector<double> bk_initial_from_med(const MedDensity& med) {
    const auto& b = med.buckets();
    std::vector<double> lambdas(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        lambdas[i] = i == 0 ? b[0].beta : b[i].beta - b[i - 1].beta;
    }
    return lambdas;
}

BkDensity bk_calibrate(std::span<const double> strikes,
                       std::span<const double> calls,
                       const BkOptions& options,
                       std::optional<std::vector<double>> initial) {
    std::vector<double> lambdas(strikes.size(), 0.0);
    check_strikes(lambdas, strikes);
    check_calls(strikes, calls);
    const double forward = calls[0];
    if (initial) {
        if (initial->size() != strikes.size()) {
            throw DomainError("initial multipliers do not match the strikes");
        }
        lambdas = *initial;
    } else {
        lambdas[0] = -1.0 / forward;
    }
    if (!(std::accumulate(lambdas.begin(), lambdas.end(), 0.0) < 0.0)) {
        throw IntegrabilityError("initial BK multipliers are not integrable");
    }

    const double target = options.tolerance * forward;
    std::vector<double> r = residuals(lambdas, strikes, calls);
    const auto n = static_cast<Eigen::Index>(strikes.size());
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        if (max_abs(r) <= target) {
            return BkDensity({strikes.begin(), strikes.end()}, std::move(lambdas));
        }
        const Eigen::MatrixXd jac = bk_jacobian(lambdas, strikes);
        const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(r.data(), n);
        const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(rhs);
        if (!step.allFinite()) {
            break;
        }

        // Armijo on the dual, with a residual decrease accepted once the dual
        // change is lost in rounding near the solution.
        const double current = squared_norm(r);
        const double phi = dual(lambdas, strikes, calls);
        const double slope = -rhs.dot(step);
        bool accepted = false;
        for (double t = 1.0; t > 1e-12; t *= 0.5) {
            std::vector<double> trial(lambdas);
            for (Eigen::Index i = 0; i < n; ++i) {
                trial[static_cast<std::size_t>(i)] += t * step(i);
            }
            if (!(std::accumulate(trial.begin(), trial.end(), 0.0) < 0.0)) {
                continue;
            }
            std::vector<double> trial_r = residuals(trial, strikes, calls);
            const double norm = squared_norm(trial_r);
            const double trial_phi = dual(trial, strikes, calls);
            const bool descent = trial_phi <= phi + 1e-4 * t * slope;
            const bool flat = trial_phi <= phi + 1e-12 * std::max(1.0, std::abs(phi));
            if (std::isfinite(norm) && (descent || (flat && norm < current))) {
                lambdas = std::move(trial);
                r = std::move(trial_r);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            break;
        }
    }
    if (max_abs(r) <= target) {
        return BkDensity({strikes.begin(), strikes.end()}, std::move(lambdas));
    }
    throw NonConvergence("BK Newton did not reach tolerance", max_abs(r));
}

double bk_max_residual(const BkDensity& bk, std::span<const double> calls) {
    return max_abs(residuals(bk.lambdas(), bk.strikes(), calls));
}

namespace {

// Strike grid and multipliers with `strike` inserted (zero multiplier), plus its index.
std::size_t with_knot(const BkDensity& bk, double strike, std::vector<double>& strikes, std::vector<double>& lambdas) {
    if (!(strike >= 0.0)) {
        throw DomainError("BK prices need a non-negative strike, got " + std::to_string(strike));
    }
    strikes = bk.strikes();
    lambdas = bk.lambdas();
    const auto it = std::lower_bound(strikes.begin(), strikes.end(), strike);
    const auto idx = static_cast<std::size_t>(it - strikes.begin());
    if (it == strikes.end() || *it != strike) {
        strikes.insert(it, strike);
        lambdas.insert(lambdas.begin() + static_cast<std::ptrdiff_t>(idx), 0.0);
    }
    return idx;
}

} // namespace

double bk_price_call(const BkDensity& bk, double strike) {
    std::vector<double> strikes;
    std::vector<double> lambdas;
    const std::size_t idx = with_knot(bk, strike, strikes, lambdas);
    const BkMoments m = bk_moments(lambdas, strikes);
    return call_moment(m, idx, strike) / normalizer(m);
}

double bk_price_digital(const BkDensity& bk, double strike) {
    std::vector<double> strikes;
    std::vector<double> lambdas;
    const std::size_t idx = with_knot(bk, strike, strikes, lambdas);
    const BkMoments m = bk_moments(lambdas, strikes);
    double above = 0.0;
    for (std::size_t j = idx; j < m.piece.size(); ++j) {
        above += m.piece[j][0];
    }
    return above / normalizer(m);
}

double bk_pdf(const BkDensity& bk, double x) {
    if (x < 0.0) {
        return 0.0;
    }
    double q = 0.0;
    const auto& k = bk.strikes();
    const auto& l = bk.lambdas();
    for (std::size_t i = 0; i < k.size() && k[i] < x; ++i) {
        q += l[i] * (x - k[i]);
    }
    return std::exp(q - bk.log_mu());
}

} // namespace maxent
