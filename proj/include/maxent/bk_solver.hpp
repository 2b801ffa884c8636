#pragma once

#include "maxent/med_solver.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace maxent {

/// Calls-only maximum entropy density exp(sum_i lambda_i (x - K_i)^+) / mu.
///
/// strikes()[0] is 0, so lambdas()[0] is the slope on [0, K_2) and the tail
/// slope is the sum of all multipliers (negative for integrability).
class BkDensity {
public:
    /// Normalizer computed from the multipliers. Throws IntegrabilityError when
    /// the tail slope is not negative.
    BkDensity(std::vector<double> strikes, std::vector<double> lambdas);

    const std::vector<double>& strikes() const noexcept { return strikes_; }
    const std::vector<double>& lambdas() const noexcept { return lambdas_; }
    double mu() const;
    double log_mu() const noexcept { return log_mu_; }
    double forward() const;

private:
    std::vector<double> strikes_;
    std::vector<double> lambdas_;
    double log_mu_;
};

/// Integrals of t^k e^{q(K_j + t)} over each linear piece of the exponent, in
/// local coordinates t = x - K_j. Piece j covers [K_j, K_{j+1}); the last piece
/// is the tail [K_m, inf). All values are scaled by exp(-log_scale).
struct BkMoments {
    double log_scale = 0.0;
    std::vector<double> lower;
    std::vector<double> width; ///< +inf on the tail piece
    std::vector<double> slope;
    std::vector<std::array<double, 3>> piece; ///< orders 0, 1, 2
};

/// Throws IntegrabilityError when sum(lambdas) >= 0.
BkMoments bk_moments(std::span<const double> lambdas, std::span<const double> strikes);

/// Covariance matrix Cov((X - K_i)^+, (X - K_j)^+): the Jacobian of the call
/// residuals with respect to the multipliers.
Eigen::MatrixXd bk_jacobian(std::span<const double> lambdas, std::span<const double> strikes);

/// E[(X - K_i)^+] under the density defined by the multipliers.
std::vector<double> bk_expected_calls(std::span<const double> lambdas, std::span<const double> strikes);

struct BkOptions {
    /// Convergence when max |residual| <= tolerance * forward.
    double tolerance = 1e-10;
    int max_iterations = 60;
};

/// lambda_1 = beta_0, lambda_i = beta_{i-1} - beta_{i-2}: a feasible start from
/// a calls-and-digitals MED on the same strikes.
std::vector<double> bk_initial_from_med(const MedDensity& med);

/// Newton on the call residuals, backtracking on the convex dual
/// log mu - sum lambda_i C_i. Without an initial guess the solver
/// starts from the forward-only exponential lambda_1 = -1/F, others 0.
BkDensity bk_calibrate(std::span<const double> strikes,
                       std::span<const double> calls,
                       const BkOptions& options = {},
                       std::optional<std::vector<double>> initial = std::nullopt);

/// Maximum absolute call residual of a calibrated density against `calls`.
double bk_max_residual(const BkDensity& bk, std::span<const double> calls);

double bk_price_call(const BkDensity& bk, double strike);
double bk_price_digital(const BkDensity& bk, double strike);
double bk_pdf(const BkDensity& bk, double x);

} // namespace maxent
