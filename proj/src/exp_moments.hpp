#pragma once

// Moments of exponential pieces shared by the piecewise-exponential densities.

#include <cmath>

namespace maxent::detail {

/// e^{log_scale} * \int_0^1 s^k e^{z s} ds for k in {0, 1, 2}.
///
/// Series for |z| < 1; otherwise closed forms with e^z folded into the scale
/// so that large positive z does not overflow when log_scale compensates.
inline double exp_moment(int k, double z, double log_scale = 0.0) {
    if (std::abs(z) < 1.0) {
        double term = 1.0;
        double sum = 1.0 / (k + 1);
        for (int n = 1; n < 30; ++n) {
            term *= z / n;
            sum += term / (n + k + 1);
        }
        return std::exp(log_scale) * sum;
    }
    if (z > 0.0) {
        const double em = std::exp(-z);
        double reduced = 0.0;
        switch (k) {
        case 0: reduced = -std::expm1(-z) / z; break;
        case 1: reduced = ((z - 1.0) + em) / (z * z); break;
        default: reduced = ((z * z - 2.0 * z + 2.0) - 2.0 * em) / (z * z * z); break;
        }
        return std::exp(log_scale + z) * reduced;
    }
    const double e = std::exp(z);
    double value = 0.0;
    switch (k) {
    case 0: value = std::expm1(z) / z; break;
    case 1: value = (e * (z - 1.0) + 1.0) / (z * z); break;
    default: value = (e * (z * z - 2.0 * z + 2.0) - 2.0) / (z * z * z); break;
    }
    return std::exp(log_scale) * value;
}

/// (e^z - 1 - z) / z^2 = \int_0^1 (1 - s) e^{z s} ds.
inline double exp_tail_weight(double z) {
    if (std::abs(z) < 1.0) {
        double term = 1.0;
        double sum = 0.5;
        for (int n = 1; n < 30; ++n) {
            term *= z / n;
            sum += term / ((n + 1.0) * (n + 2.0));
        }
        return sum;
    }
    return (std::expm1(z) - z) / (z * z);
}

} // namespace maxent::detail
