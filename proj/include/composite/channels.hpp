#pragma once

// Two worked composite channels and their capacity metrics:
//  * a two-state composite BSC (state drawn once, held for the block), and
//  * a slow Rayleigh-fading AWGN channel with receiver-only CSI.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "composite/errors.hpp"
#include "composite/numeric.hpp"
#include "composite/specfn.hpp"
#include "composite/types.hpp"

namespace composite {

/// Two-state composite BSC. State 1 (crossover alpha1) occurs with
/// probability 1-p, state 2 (alpha2) with probability p; b = m/n channel uses
/// per source bit.
class CompositeBsc {
public:
    CompositeBsc(double alpha1, double alpha2, double p, double b)
        : alpha1_(alpha1), alpha2_(alpha2), p_(p), b_(b) {
        if (!(alpha1 > 0.0 && alpha1 <= alpha2 && alpha2 < 0.5)) {
            detail::domain_fail("CompositeBsc", "require 0 < alpha1 <= alpha2 < 1/2");
        }
        if (!(p >= 0.0 && p <= 1.0)) {
            detail::domain_fail("CompositeBsc", "state probability p outside [0,1]");
        }
        if (!(b >= 1.0) || std::isinf(b)) {
            detail::domain_fail("CompositeBsc", "bandwidth ratio b must be finite and >= 1");
        }
    }

    double alpha1() const noexcept { return alpha1_; }
    double alpha2() const noexcept { return alpha2_; }
    double p() const noexcept { return p_; }
    double b() const noexcept { return b_; }

    /// True when even the good state could carry the source losslessly,
    /// b(1 - h(alpha1)) >= 1. The binary schemes are meant for the opposite
    /// regime; callers should warn.
    bool good_state_lossless() const { return b_ * (1.0 - binary_entropy(alpha1_)) >= 1.0; }

    CompositeBsc with_p(double p) const { return {alpha1_, alpha2_, p, b_}; }

private:
    double alpha1_;
    double alpha2_;
    double p_;
    double b_;
};

/// Gaussian source over slow Rayleigh fading: source variance sigma2, power
/// constraint P, mean channel power gain gamma_bar, unit-variance noise.
class RayleighSystem {
public:
    RayleighSystem(double sigma2, double power, double gamma_bar)
        : sigma2_(sigma2), power_(power), gamma_bar_(gamma_bar) {
        if (!(sigma2 > 0.0 && power > 0.0 && gamma_bar > 0.0) || std::isinf(sigma2) ||
            std::isinf(power) || std::isinf(gamma_bar)) {
            detail::domain_fail("RayleighSystem", "sigma2, P and gamma_bar must be finite and > 0");
        }
    }

    double sigma2() const noexcept { return sigma2_; }
    double power() const noexcept { return power_; }
    double gamma_bar() const noexcept { return gamma_bar_; }
    double snr() const noexcept { return power_ * gamma_bar_; }

    /// Exponential fading density p(gamma) = e^{-gamma/gbar}/gbar.
    double fading_pdf(double gamma) const {
        return gamma < 0.0 ? 0.0 : std::exp(-gamma / gamma_bar_) / gamma_bar_;
    }
    double fading_cdf(double gamma) const {
        return gamma <= 0.0 ? 0.0 : -std::expm1(-gamma / gamma_bar_);
    }

private:
    double sigma2_;
    double power_;
    double gamma_bar_;
};

/// Broadcast rates in bits per channel use: r1 reaches the good state only,
/// r2 is decodable in both.
struct RatePair {
    BitsRate r1;
    BitsRate r2;
};

namespace detail {

inline void require_outage_level(const char* where, double q) {
    if (!(q >= 0.0 && q < 1.0)) {
        domain_fail(where, "outage probability must lie in [0,1)");
    }
}

}  // namespace detail

/// Channel-gain threshold gamma_q = -gbar ln(1-q) below which the state is in outage.
inline double rayleigh_outage_threshold(const RayleighSystem& sys, double q) {
    detail::require_outage_level("rayleigh_outage_threshold", q);
    return -sys.gamma_bar() * std::log1p(-q);
}

/// C_q = ln(1 + P gamma_q).
inline NatsRate capacity_vs_outage_rayleigh(const RayleighSystem& sys, double q) {
    detail::require_outage_level("capacity_vs_outage_rayleigh", q);
    return NatsRate(std::log1p(sys.power() * rayleigh_outage_threshold(sys, q)));
}

/// C^o_q = (1-q) C_q.
inline NatsRate outage_capacity_rayleigh(const RayleighSystem& sys, double q) {
    detail::require_outage_level("outage_capacity_rayleigh", q);
    return NatsRate((1.0 - q) * capacity_vs_outage_rayleigh(sys, q).value());
}

/// Maximizer of the outage capacity: q = 1 - exp(-(e^{W(x)} - 1)/x), x = P gbar.
inline Probability optimal_outage_for_capacity(const RayleighSystem& sys) {
    const double x = sys.snr();
    const double w = lambert_w(x);
    return Probability(-std::expm1(-std::expm1(w) / x));
}

/// Capacity versus outage of the two-state BSC. Only the two pure strategies
/// exist: an outage budget below p cannot exclude the bad state.
inline BitsRate capacity_vs_outage_bsc(const CompositeBsc& ch, double q) {
    detail::require_outage_level("capacity_vs_outage_bsc", q);
    const double alpha = (q < ch.p()) ? ch.alpha2() : ch.alpha1();
    return BitsRate(1.0 - binary_entropy(alpha));
}

/// Boundary point of the degraded BSC broadcast region at superposition
/// parameter beta in [0, 1/2].
inline RatePair bsc_bc_rate_region(const CompositeBsc& ch, double beta) {
    if (!(beta >= 0.0 && beta <= 0.5)) {
        detail::domain_fail("bsc_bc_rate_region", "beta must lie in [0, 1/2]");
    }
    const double r1 = binary_entropy(binary_convolve(ch.alpha1(), beta)) - binary_entropy(ch.alpha1());
    const double r2 = 1.0 - binary_entropy(binary_convolve(ch.alpha2(), beta));
    return {BitsRate(std::max(0.0, r1)), BitsRate(std::max(0.0, r2))};
}

struct ExpectedCapacity {
    BitsRate value;
    Probability beta;
};

/// Expected capacity: max over beta of (1-p)(R1+R2) + p R2.
inline ExpectedCapacity bsc_expected_capacity(const CompositeBsc& ch, std::size_t grid = 1024) {
    if (grid < 2) detail::domain_fail("bsc_expected_capacity", "grid must be >= 2");
    auto neg = [&](double beta) {
        const auto r = bsc_bc_rate_region(ch, beta);
        return -((1.0 - ch.p()) * (r.r1 + r.r2) + ch.p() * r.r2);
    };
    const auto best = minimize_scalar(neg, 0.0, 0.5, 1e-12, grid);
    return {BitsRate(std::max(0.0, -best.min)), Probability(best.argmin)};
}

}  // namespace composite
