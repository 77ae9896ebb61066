#pragma once

// Gaussian source over a slow Rayleigh-fading channel, bandwidth ratio 1.
// All rates in nats; all distortions are mean squared error.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string_view>
#include <vector>

#include "composite/channels.hpp"
#include "composite/errors.hpp"
#include "composite/numeric.hpp"
#include "composite/specfn.hpp"
#include "composite/types.hpp"

namespace composite {

enum class GaussianScheme { Uncoded, OutageSeparation, BroadcastSeparation };

inline std::string_view to_string(GaussianScheme s) {
    switch (s) {
        case GaussianScheme::Uncoded: return "uncoded";
        case GaussianScheme::OutageSeparation: return "outage_separation";
        case GaussianScheme::BroadcastSeparation: return "broadcast_separation";
    }
    return "?";
}

struct GaussianSchemeResult {
    GaussianScheme scheme;
    double expected_distortion;
    /// q* for the outage scheme, gamma_P for the broadcast scheme.
    std::optional<double> optimal_param;
};

/// Layered power allocation over a gain interval. `interference(g)` is the
/// power of the layers still undecoded at gain g; `density` is -dI/dg.
struct PowerProfile {
    double support_lo = 0.0;
    double support_hi = 0.0;
    std::function<double(double)> interference;
    std::function<double(double)> density;
    double total_power = 0.0;
};

/// D*_gamma = sigma2 / (1 + P gamma), achieved per state by linear transmission.
inline double uncoded_state_distortion(const RayleighSystem& sys, double gamma) {
    if (!(gamma >= 0.0)) detail::domain_fail("uncoded_state_distortion", "gamma must be >= 0");
    return sys.sigma2() / (1.0 + sys.power() * gamma);
}

/// E[D*_gamma] = sigma2 e^{1/x} E1(1/x) / x with x = P gbar.
inline double uncoded_expected_distortion(const RayleighSystem& sys) {
    const double inv = 1.0 / sys.snr();
    return sys.sigma2() * inv * exp_integral_scaled(inv);
}

/// Expected distortion q sigma2 + (1-q) sigma2 / (1 - P gbar ln(1-q)) of a
/// single-rate source code on a capacity-versus-outage channel code.
inline double outage_separation_distortion(const RayleighSystem& sys, double q) {
    detail::require_outage_level("outage_separation_distortion", q);
    const double s2 = sys.sigma2();
    return q * s2 + (1.0 - q) * s2 / (1.0 - sys.snr() * std::log1p(-q));
}

struct OutageOptimum {
    Probability q;
    double expected_distortion;
};

/// Closed-form minimizer q*_D = 1 - exp(-2 / (1 + sqrt(1 + 4 P gbar))).
inline OutageOptimum optimal_outage_for_distortion(const RayleighSystem& sys) {
    const double q = -std::expm1(-2.0 / (1.0 + std::sqrt(1.0 + 4.0 * sys.snr())));
    return {Probability(q), outage_separation_distortion(sys, q)};
}

/// Numeric minimization of the outage-scheme distortion over q.
inline OutageOptimum minimize_outage_separation(const RayleighSystem& sys, double tol = 1e-12) {
    const auto m = minimize_scalar([&](double q) { return outage_separation_distortion(sys, q); },
                                   0.0, 1.0 - 1e-12, tol, 4096);
    return {Probability(m.argmin), m.min};
}

/// Whether separation meets distortion Dq outside an outage set of probability q:
/// sigma2 / Dq < 1 - P gbar ln(1-q).
inline bool requirement_check(const RayleighSystem& sys, double q, double dq) {
    detail::require_outage_level("requirement_check", q);
    if (!(dq > 0.0)) detail::domain_fail("requirement_check", "target distortion must be > 0");
    return sys.sigma2() / dq < 1.0 - sys.snr() * std::log1p(-q);
}

namespace detail {

inline QuadratureOptions fine_quadrature() {
    QuadratureOptions opt;
    opt.rel_tol = 1e-13;
    opt.abs_tol = 1e-300;
    return opt;
}

}  // namespace detail

/// Interference level of the expected-distortion-optimal power profile,
/// I(g) = \int_{gbar}^{g} (1/(2 gbar) - 1/u) e^{-u/(2 gbar)} du / (g e^{-g/(2 gbar)}),
/// for 0 < g <= gbar.
inline double bc_interference(const RayleighSystem& sys, double gamma) {
    const double gb = sys.gamma_bar();
    if (!(gamma > 0.0 && gamma <= gb)) {
        detail::domain_fail("bc_interference", "gamma must lie in (0, gamma_bar]");
    }
    if (gamma == gb) return 0.0;
    const double num = integrate(
        [gb](double u) { return (0.5 / gb - 1.0 / u) * std::exp(-0.5 * u / gb); }, gb, gamma,
        detail::fine_quadrature());
    return num / (gamma * std::exp(-0.5 * gamma / gb));
}

/// Power density rho(g) = -I'(g) = (1/g - 1/(2 gbar)) (1/g + I(g)), obtained by
/// differentiating the quotient defining I.
inline double bc_power_density(const RayleighSystem& sys, double gamma) {
    const double gb = sys.gamma_bar();
    return (1.0 / gamma - 0.5 / gb) * (1.0 / gamma + bc_interference(sys, gamma));
}

/// gamma_P solving I(gamma_P) = P: the weakest state served by the optimal profile.
inline double bc_power_threshold(const RayleighSystem& sys) {
    const double gb = sys.gamma_bar();
    const double target = sys.power();
    double lo = 0.5 * gb;
    const double floor = 1e-12 * gb;
    while (bc_interference(sys, lo) < target) {
        if (lo <= floor) {
            std::ostringstream msg;
            msg << "bc_power_threshold: P=" << target << " exceeds the reachable range [0, "
                << bc_interference(sys, lo) << "] of I on [" << floor << ", " << gb << "]";
            throw NoSolutionError(msg.str());
        }
        lo = std::max(floor, 0.25 * lo);
    }
    return find_root([&](double g) { return bc_interference(sys, g) - target; }, lo, gb, 1e-13 * gb);
}

/// Normalized expected distortion contributed by the states above gamma
/// under the optimal profile started at gamma.
inline double bc_tail_distortion(const RayleighSystem& sys, double gamma) {
    const double gb = sys.gamma_bar();
    if (!(gamma > 0.0)) detail::domain_fail("bc_tail_distortion", "gamma must be > 0");
    const double integral = integrate(
        [gb](double u) { return std::exp(-(u + gb) / (2.0 * gb)) * (gb / u); }, gb, gamma,
        detail::fine_quadrature());
    const double num = std::exp(-1.0) - integral / gb;
    const double den = (gb / gamma) * std::exp((gamma - gb) / (2.0 * gb));
    return num / den;
}

/// Minimum expected distortion of a multi-resolution source code on the
/// optimal broadcast (superposition) channel code.
inline double bc_expected_distortion(const RayleighSystem& sys) {
    const double gp = bc_power_threshold(sys);
    return sys.sigma2() * (bc_tail_distortion(sys, gp) + sys.fading_cdf(gp));
}

/// The expected-distortion-optimal profile, supported on [gamma_P, gbar].
inline PowerProfile optimal_power_profile(const RayleighSystem& sys) {
    PowerProfile prof;
    prof.support_lo = bc_power_threshold(sys);
    prof.support_hi = sys.gamma_bar();
    prof.interference = [sys](double g) { return bc_interference(sys, g); };
    prof.density = [sys](double g) { return bc_power_density(sys, g); };
    prof.total_power = sys.power();
    return prof;
}

/// R(g) = \int_0^g u rho(u) / (1 + u I(u)) du, in nats per channel use.
inline NatsRate bc_rate_profile(const PowerProfile& prof, double gamma, double tol = 1e-10) {
    if (!(gamma >= 0.0)) detail::domain_fail("bc_rate_profile", "gamma must be >= 0");
    const double hi = std::min(gamma, prof.support_hi);
    if (hi <= prof.support_lo) return NatsRate(0.0);
    const double r = integrate(
        [&](double u) { return u * prof.density(u) / (1.0 + u * prof.interference(u)); },
        prof.support_lo, hi, tol);
    return NatsRate(std::max(0.0, r));
}

/// \int sigma2 e^{-R(g)} p(g) dg for a given profile.
inline double profile_expected_distortion(const RayleighSystem& sys, const PowerProfile& prof,
                                          double tol = 1e-8) {
    const double lo = prof.support_lo;
    const double hi = prof.support_hi;
    const double below = sys.fading_cdf(lo);
    const double middle = integrate(
        [&](double g) { return std::exp(-bc_rate_profile(prof, g, tol).value()) * sys.fading_pdf(g); },
        lo, hi, tol);
    const double above = std::exp(-bc_rate_profile(prof, hi, tol).value()) * (1.0 - sys.fading_cdf(hi));
    return sys.sigma2() * (below + middle + above);
}

struct LayeredAllocation {
    std::vector<double> thresholds;
    /// Power left undecoded after each layer; nonincreasing, first entry <= P.
    std::vector<double> interference;
    double expected_distortion = 0.0;
    int sweeps = 0;
};

namespace detail {

inline double layered_objective(const RayleighSystem& sys, const std::vector<double>& g,
                                const std::vector<double>& interf) {
    double cum_rate = 0.0;
    double prev = sys.power();
    double total = sys.fading_cdf(g.front());
    for (std::size_t k = 0; k < g.size(); ++k) {
        cum_rate += std::log((1.0 + g[k] * prev) / (1.0 + g[k] * interf[k]));
        prev = interf[k];
        const double upper = (k + 1 < g.size()) ? sys.fading_cdf(g[k + 1]) : 1.0;
        total += (upper - sys.fading_cdf(g[k])) * std::exp(-cum_rate);
    }
    return sys.sigma2() * total;
}

}  // namespace detail

/// Direct minimization of the expected distortion over a `levels`-layer
/// superposition code with decoding thresholds on a uniform grid in
/// [gbar/100, 1.5 gbar]. Coordinate descent with golden-section line search
/// on the residual interference after each layer.
inline LayeredAllocation layered_broadcast_optimum(const RayleighSystem& sys, std::size_t levels = 64,
                                                   int max_sweeps = 4000) {
    if (levels < 1) detail::domain_fail("layered_broadcast_optimum", "levels must be >= 1");
    const double gb = sys.gamma_bar();
    const double lo = 0.01 * gb;
    const double hi = 1.5 * gb;
    LayeredAllocation out;
    out.thresholds.resize(levels);
    out.interference.resize(levels);
    for (std::size_t k = 0; k < levels; ++k) {
        const double t = levels == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(levels - 1);
        out.thresholds[k] = lo + t * (hi - lo);
        out.interference[k] = sys.power() * (1.0 - static_cast<double>(k + 1) / static_cast<double>(levels));
    }
    auto& I = out.interference;
    double current = detail::layered_objective(sys, out.thresholds, I);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        const double before = current;
        for (std::size_t k = 0; k < levels; ++k) {
            double a = (k + 1 < levels) ? I[k + 1] : 0.0;
            double b = (k == 0) ? sys.power() : I[k - 1];
            const double keep = I[k];
            auto f = [&](double x) {
                I[k] = x;
                return detail::layered_objective(sys, out.thresholds, I);
            };
            double c = b - inv_phi * (b - a);
            double d = a + inv_phi * (b - a);
            double fc = f(c);
            double fd = f(d);
            while (b - a > 1e-13 * (1.0 + sys.power())) {
                if (fc < fd) {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - inv_phi * (b - a);
                    fc = f(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + inv_phi * (b - a);
                    fd = f(d);
                }
            }
            const double cand = 0.5 * (a + b);
            const double fcand = f(cand);
            if (fcand < current) {
                current = fcand;
            } else {
                I[k] = keep;
            }
        }
        if (before - current <= 1e-15 * current) break;
    }
    out.expected_distortion = current;
    out.sweeps = sweep;
    return out;
}

/// Expected distortion of the three schemes at one system point.
inline std::array<GaussianSchemeResult, 3> gaussian_schemes(const RayleighSystem& sys) {
    const auto outage = optimal_outage_for_distortion(sys);
    return {{
        {GaussianScheme::Uncoded, uncoded_expected_distortion(sys), std::nullopt},
        {GaussianScheme::OutageSeparation, outage.expected_distortion, outage.q.value()},
        {GaussianScheme::BroadcastSeparation, bc_expected_distortion(sys), bc_power_threshold(sys)},
    }};
}

}  // namespace composite
