#pragma once

// Binary information measures, the exponential integral E1 and the principal
// branch of Lambert-W.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "composite/errors.hpp"
#include "composite/numeric.hpp"
#include "composite/types.hpp"

namespace composite {

namespace detail {

inline void require_unit_interval(const char* where, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        domain_fail(where, "argument " + std::to_string(p) + " outside [0,1]");
    }
}

}  // namespace detail

/// h(p) in bits, with h(0) = h(1) = 0.
inline double binary_entropy(double p) {
    detail::require_unit_interval("binary_entropy", p);
    if (p == 0.0 || p == 1.0) return 0.0;
    const double q = 1.0 - p;
    return -(p * std::log(p) + q * std::log1p(-p)) / std::numbers::ln2;
}

/// The unique p in [0, 1/2] with h(p) = r.
inline double inverse_binary_entropy(double r) {
    detail::require_unit_interval("inverse_binary_entropy", r);
    if (r == 0.0) return 0.0;
    if (r == 1.0) return 0.5;
    return find_root([r](double p) { return binary_entropy(p) - r; }, 0.0, 0.5, 1e-16);
}

/// Distortion-rate function of the binary symmetric source, D(R) = h^{-1}(1 - R).
/// Rates at or above one bit per symbol are lossless.
inline double bss_distortion_rate(double rate_bits) {
    if (!(rate_bits >= 0.0)) {
        detail::domain_fail("bss_distortion_rate", "rate must be >= 0");
    }
    if (rate_bits >= 1.0) return 0.0;
    return inverse_binary_entropy(1.0 - rate_bits);
}

/// a * b = a(1-b) + b(1-a): crossover of two cascaded BSCs.
inline double binary_convolve(double a, double b) {
    detail::require_unit_interval("binary_convolve", a);
    detail::require_unit_interval("binary_convolve", b);
    return a * (1.0 - b) + b * (1.0 - a);
}

namespace detail {

// e^x E1(x) for x > 1 by the modified Lentz continued fraction.
inline double expint_cf_scaled(double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return h;
    }
    throw NonConvergenceError("exp_integral: continued fraction did not converge");
}

// E1(x) for 0 < x <= 1 by its power series.
inline double expint_series(double x) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 1000; ++k) {
        term *= -x / k;
        const double contrib = -term / k;
        sum += contrib;
        if (std::abs(contrib) < 1e-17 * std::abs(sum)) break;
    }
    return -std::numbers::egamma - std::log(x) + sum;
}

}  // namespace detail

/// E1(x) = \int_x^\infty e^{-t}/t dt.
///
/// This is the function some texts write as Ei(x); the conventional
/// Ei(x) = -E1(-x) has the opposite sign convention and is not provided.
inline double exp_integral(double x) {
    if (!(x > 0.0)) {
        detail::domain_fail("exp_integral", "requires x > 0");
    }
    if (x <= 1.0) return detail::expint_series(x);
    return std::exp(-x) * detail::expint_cf_scaled(x);
}

/// e^x E1(x), finite for large x where E1 itself underflows.
inline double exp_integral_scaled(double x) {
    if (!(x > 0.0)) {
        detail::domain_fail("exp_integral_scaled", "requires x > 0");
    }
    if (x <= 1.0) return std::exp(x) * detail::expint_series(x);
    return detail::expint_cf_scaled(x);
}

/// Principal branch W0(z) for z >= 0, by Halley iteration.
inline double lambert_w(double z) {
    if (!(z >= 0.0)) {
        detail::domain_fail("lambert_w", "principal real branch requires z >= 0");
    }
    if (z == 0.0) return 0.0;
    if (std::isinf(z)) return z;
    double w;
    if (z < 3.0) {
        w = std::log1p(z);
        w = w * (1.0 - std::log1p(w) / (2.0 + w));
    } else {
        const double l1 = std::log(z);
        const double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }
    for (int it = 0; it < 100; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - z;
        const double wp1 = w + 1.0;
        const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) {
            break;
        }
    }
    return w;
}

}  // namespace composite
