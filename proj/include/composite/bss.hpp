#pragma once

// Binary symmetric source over the two-state composite BSC: the layered
// broadcast scheme (with its Shannon and outage endpoints), the two
// systematic Wyner-Ziv schemes, and quantization residue splitting.
//
// Distortions are Hamming; rates in bits; interface complexities K^t / K^r
// in bits per source symbol crossing the transmitter / receiver interface.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "composite/channels.hpp"
#include "composite/errors.hpp"
#include "composite/hull.hpp"
#include "composite/numeric.hpp"
#include "composite/parallel.hpp"
#include "composite/specfn.hpp"

namespace composite {

enum class BssScheme { Broadcast, Shannon, Outage, SystematicGood, SystematicBad, ResidueSplitting };

inline std::string_view to_string(BssScheme s) {
    switch (s) {
        case BssScheme::Broadcast: return "broadcast";
        case BssScheme::Shannon: return "shannon";
        case BssScheme::Outage: return "outage";
        case BssScheme::SystematicGood: return "systematic_good";
        case BssScheme::SystematicBad: return "systematic_bad";
        case BssScheme::ResidueSplitting: return "residue_splitting";
    }
    return "?";
}

struct SchemeEvaluation {
    BssScheme scheme = BssScheme::Broadcast;
    std::map<std::string, double> params;
    double d1 = 0.5;
    double d2 = 0.5;
    double expected = 0.5;
    double kt = 0.0;
    double kr = 0.0;

    double param(const std::string& name, double fallback = 0.0) const {
        auto it = params.find(name);
        return it == params.end() ? fallback : it->second;
    }
    DistortionPair pair() const { return {d1, d2}; }
};

namespace detail {

inline SchemeEvaluation finish(const CompositeBsc& ch, SchemeEvaluation e) {
    if (e.d1 > e.d2 + 1e-12) {
        throw std::logic_error(std::string(to_string(e.scheme)) +
                               ": good-state distortion exceeds bad-state distortion");
    }
    e.expected = (1.0 - ch.p()) * e.d1 + ch.p() * e.d2;
    return e;
}

}  // namespace detail

/// MR source code over the superposition BC code at parameter beta:
/// D1 = D(b(R1+R2)), D2 = D(b R2), K^t = b(R1+R2), K^r = b[(1-p)R1 + R2].
inline SchemeEvaluation broadcast_scheme(const CompositeBsc& ch, double beta) {
    const auto r = bsc_bc_rate_region(ch, beta);
    const double b = ch.b();
    SchemeEvaluation e;
    e.scheme = BssScheme::Broadcast;
    e.params["beta"] = beta;
    e.d1 = bss_distortion_rate(b * (r.r1 + r.r2));
    e.d2 = bss_distortion_rate(b * r.r2);
    e.kt = b * (r.r1 + r.r2);
    e.kr = b * ((1.0 - ch.p()) * r.r1 + r.r2);
    return detail::finish(ch, std::move(e));
}

/// Single-rate code for the bad state (beta = 0).
inline SchemeEvaluation shannon_scheme(const CompositeBsc& ch) {
    auto e = broadcast_scheme(ch, 0.0);
    e.scheme = BssScheme::Shannon;
    return e;
}

/// Single-rate code for the good state, bad state in outage (beta = 1/2).
inline SchemeEvaluation outage_scheme(const CompositeBsc& ch) {
    auto e = broadcast_scheme(ch, 0.5);
    e.scheme = BssScheme::Outage;
    return e;
}

/// Wyner-Ziv rate-distortion curve for a BSS with side information through a
/// BSC(alpha): g(d) = h(alpha*d) - h(d) up to the turning point d_c, then the
/// straight line to (alpha, 0).
class WynerZivCurve {
public:
    explicit WynerZivCurve(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0 && alpha < 0.5)) {
            detail::domain_fail("WynerZivCurve", "side-information crossover must lie in (0, 1/2)");
        }
        dc_ = solve_turning_point(alpha);
        slope_ = g_prime(dc_);
    }

    double alpha() const noexcept { return alpha_; }
    double dc() const noexcept { return dc_; }

    /// g(d) for 0 <= d < alpha; zero at d = alpha.
    double g(double d) const { return g(d, alpha_); }
    double g_prime(double d) const { return g_prime(d, alpha_); }

    double rate(double d) const {
        if (!(d >= 0.0 && d <= alpha_)) {
            detail::domain_fail("wyner_ziv_rate", "distortion must lie in [0, alpha]");
        }
        if (d <= dc_) return g(d);
        return -slope_ * (alpha_ - d);
    }

    double distortion(double r) const {
        const double r0 = binary_entropy(alpha_);
        if (!(r >= 0.0) || r > r0 * (1.0 + 1e-14)) {
            detail::domain_fail("wyner_ziv_distortion", "rate must lie in [0, h(alpha)]");
        }
        if (r == 0.0) return alpha_;
        if (r >= r0) return 0.0;
        return find_root([&](double d) { return rate(d) - r; }, 0.0, alpha_, 1e-15);
    }

    static double g(double d, double alpha) {
        if (d >= alpha) return 0.0;
        return binary_entropy(binary_convolve(alpha, d)) - binary_entropy(d);
    }

    static double g_prime(double d, double alpha) {
        const double ad = binary_convolve(alpha, d);
        return ((1.0 - 2.0 * alpha) * std::log((1.0 - ad) / ad) - std::log((1.0 - d) / d)) /
               std::numbers::ln2;
    }

private:
    static double solve_turning_point(double alpha) {
        // Tangent from (alpha, 0): F(d) = g(d) - g'(d)(d - alpha). F -> -inf
        // as d -> 0 and F -> g(alpha-) > 0 as d -> alpha.
        auto F = [alpha](double d) { return g(d, alpha) - g_prime(d, alpha) * (d - alpha); };
        const double lo = std::min(1e-12, 1e-6 * alpha);
        const double hi = alpha * (1.0 - 1e-12);
        return find_root(F, lo, hi, 1e-16);
    }

    double alpha_;
    double dc_ = 0.0;
    double slope_ = 0.0;
};

inline double wyner_ziv_turning_point(double alpha) { return WynerZivCurve(alpha).dc(); }

inline double wyner_ziv_rate(double d, double alpha) { return WynerZivCurve(alpha).rate(d); }

inline double wyner_ziv_distortion(double r, double alpha) {
    return WynerZivCurve(alpha).distortion(r);
}

namespace detail {

// Wyner-Ziv distortion at a rate, treating rates beyond h(alpha) as lossless.
inline double wz_distortion_clamped(const WynerZivCurve& wz, double r) {
    if (r >= binary_entropy(wz.alpha())) return 0.0;
    return wz.distortion(r);
}

}  // namespace detail

/// Uncoded bits on n channel uses plus a Wyner-Ziv code for the good state on
/// the remaining (b-1)n uses. The bad state falls back to the uncoded bits.
inline SchemeEvaluation systematic_scheme_good(const CompositeBsc& ch) {
    const double c1 = 1.0 - binary_entropy(ch.alpha1());
    const double primary = (ch.b() - 1.0) * c1;
    const WynerZivCurve wz(ch.alpha1());
    SchemeEvaluation e;
    e.scheme = BssScheme::SystematicGood;
    e.params["dc"] = wz.dc();
    e.params["wz_rate"] = primary;
    e.d1 = detail::wz_distortion_clamped(wz, primary);
    e.d2 = ch.alpha2();
    e.kt = 1.0 + primary;
    e.kr = 1.0 + (1.0 - ch.p()) * primary;
    return detail::finish(ch, std::move(e));
}

/// Systematic code whose Wyner-Ziv layer targets the bad state. In the good
/// state the receiver either uses the Wyner-Ziv layer or the uncoded bits,
/// whichever is better, respecting the time sharing beyond d_c2.
inline SchemeEvaluation systematic_scheme_bad(const CompositeBsc& ch) {
    const double a1 = ch.alpha1();
    const double a2 = ch.alpha2();
    const double primary = (ch.b() - 1.0) * (1.0 - binary_entropy(a2));
    const WynerZivCurve wz(a2);
    const double dc2 = wz.dc();
    const double d2 = detail::wz_distortion_clamped(wz, primary);

    SchemeEvaluation e;
    e.scheme = BssScheme::SystematicBad;
    e.params["dc"] = dc2;
    e.params["wz_rate"] = primary;
    e.d2 = d2;
    const bool skip_wz = a1 <= std::min(d2, dc2);
    if (skip_wz) {
        e.d1 = a1;
    } else if (d2 <= dc2) {
        e.d1 = d2;
    } else {
        const double theta = (a2 - d2) / (a2 - dc2);
        e.params["theta"] = theta;
        e.d1 = theta * dc2 + (1.0 - theta) * a1;
    }
    e.kt = 1.0 + primary;
    e.kr = skip_wz ? 1.0 + ch.p() * primary : 1.0 + primary;
    return detail::finish(ch, std::move(e));
}

/// Residue splitting: the superposition code runs on (b - rho)n channel uses
/// and the last rho n bits of the base-layer residue go uncoded over the
/// remaining rho n uses. rho = 0 is the broadcast scheme; rho = 1 drops the
/// refinement layer entirely.
inline SchemeEvaluation residue_splitting_scheme(const CompositeBsc& ch, double beta, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
        detail::domain_fail("residue_splitting_scheme", "rho must lie in [0, 1]");
    }
    if (rho == 0.0) {
        auto e = broadcast_scheme(ch, beta);
        e.scheme = BssScheme::ResidueSplitting;
        e.params["rho"] = 0.0;
        return e;
    }
    const auto r = bsc_bc_rate_region(ch, beta);
    const double b = ch.b();
    const double a1 = ch.alpha1();
    const double a2 = ch.alpha2();
    const double primary = b - rho;

    const double d2 = bss_distortion_rate(primary * r.r2);
    SchemeEvaluation e;
    e.scheme = BssScheme::ResidueSplitting;
    e.params["beta"] = beta;
    e.params["rho"] = rho;
    e.params["d2"] = d2;
    if (rho < 1.0) {
        const double d1 = bss_distortion_rate(primary / (1.0 - rho) * r.r1 + primary * r.r2);
        e.params["d1"] = d1;
        e.d1 = (1.0 - rho) * d1 + rho * std::min(d2, a1);
        e.d2 = (1.0 - rho) * d2 + rho * std::min(d2, a2);
    } else {
        e.d1 = std::min(d2, a1);
        e.d2 = std::min(d2, a2);
    }
    e.kt = primary * (r.r1 + r.r2) + rho;
    // The uncoded residue is delivered in state i only when it beats the base
    // layer, d2 > alpha_i; equality skips delivery.
    double kr = primary * ((1.0 - ch.p()) * r.r1 + r.r2);
    if (d2 > a2) {
        kr += rho;
    } else if (d2 > a1) {
        kr += (1.0 - ch.p()) * rho;
    }
    e.kr = kr;
    return detail::finish(ch, std::move(e));
}

inline constexpr double kRhoMax = 1.0 - 1e-6;

inline double sweep_beta(std::size_t i, std::size_t grid) {
    return 0.5 * static_cast<double>(i) / static_cast<double>(grid - 1);
}

inline double sweep_rho(std::size_t j, std::size_t grid) {
    return kRhoMax * static_cast<double>(j) / static_cast<double>(grid - 1);
}

/// Every scheme evaluation of one family on its uniform parameter grid,
/// ordered by grid index (beta-major for residue splitting).
inline std::vector<SchemeEvaluation> scheme_sweep(const CompositeBsc& ch, BssScheme family,
                                                  std::size_t grid) {
    if (grid < 2) detail::domain_fail("scheme_sweep", "grid must be >= 2");
    switch (family) {
        case BssScheme::Shannon: return {shannon_scheme(ch)};
        case BssScheme::Outage: return {outage_scheme(ch)};
        case BssScheme::SystematicGood: return {systematic_scheme_good(ch)};
        case BssScheme::SystematicBad: return {systematic_scheme_bad(ch)};
        case BssScheme::Broadcast: {
            std::vector<SchemeEvaluation> out(grid);
            parallel_for(grid, [&](std::size_t i) { out[i] = broadcast_scheme(ch, sweep_beta(i, grid)); });
            return out;
        }
        case BssScheme::ResidueSplitting: {
            std::vector<SchemeEvaluation> out(grid * grid);
            parallel_for(grid, [&](std::size_t i) {
                const double beta = sweep_beta(i, grid);
                for (std::size_t j = 0; j < grid; ++j) {
                    out[i * grid + j] = residue_splitting_scheme(ch, beta, sweep_rho(j, grid));
                }
            });
            return out;
        }
    }
    return {};
}

inline std::vector<DistortionPair> distortion_pairs(const std::vector<SchemeEvaluation>& evals) {
    std::vector<DistortionPair> pts;
    pts.reserve(evals.size());
    for (const auto& e : evals) pts.push_back(e.pair());
    return pts;
}

/// Convex hull of the (D1, D2) pairs a family reaches on its parameter grid.
inline std::vector<DistortionPair> distortion_region(const CompositeBsc& ch, BssScheme family,
                                                     std::size_t grid) {
    return pareto_lower_hull(distortion_pairs(scheme_sweep(ch, family, grid)));
}

/// The four families compared on expected distortion, in tie-break order.
inline constexpr std::array<BssScheme, 4> kFrontierFamilies = {
    BssScheme::ResidueSplitting, BssScheme::Broadcast, BssScheme::SystematicGood,
    BssScheme::SystematicBad};

struct FrontierRow {
    double p = 0.0;
    /// Per-family minimum expected distortion, indexed like kFrontierFamilies.
    std::array<double, 4> family_min{};
    std::array<SchemeEvaluation, 4> family_arg{};
    BssScheme best = BssScheme::ResidueSplitting;
    double best_expected = 0.0;
};

struct Crossover {
    double p = 0.0;
    BssScheme below;
    BssScheme above;
};

struct Frontier {
    std::vector<FrontierRow> rows;
    std::vector<Crossover> crossovers;
};

/// Precomputed parameter sweeps of the four frontier families. The (D1, D2)
/// pairs do not depend on p, so one sweep serves every state distribution.
class FamilySweeps {
public:
    FamilySweeps(const CompositeBsc& ch, std::size_t grid) {
        for (std::size_t f = 0; f < kFrontierFamilies.size(); ++f) {
            evals_[f] = scheme_sweep(ch, kFrontierFamilies[f], grid);
        }
    }

    /// Minimum of (1-p) D1 + p D2 over the family's grid.
    std::pair<double, std::size_t> best(std::size_t family, double p) const {
        const auto& ev = evals_[family];
        double bestv = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t i = 0; i < ev.size(); ++i) {
            const double v = (1.0 - p) * ev[i].d1 + p * ev[i].d2;
            if (v < bestv) {
                bestv = v;
                arg = i;
            }
        }
        return {bestv, arg};
    }

    const std::vector<SchemeEvaluation>& evaluations(std::size_t family) const { return evals_[family]; }

private:
    std::array<std::vector<SchemeEvaluation>, 4> evals_;
};

namespace detail {

inline std::size_t best_family(const FamilySweeps& sw, double p) {
    std::size_t arg = 0;
    double bestv = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < kFrontierFamilies.size(); ++f) {
        const double v = sw.best(f, p).first;
        if (v < bestv) {
            bestv = v;
            arg = f;
        }
    }
    return arg;
}

}  // namespace detail

/// Best scheme family per state probability, and the p values at which the
/// best family changes (bisection on the pairwise difference of family minima).
inline Frontier expected_distortion_frontier(const CompositeBsc& ch, const std::vector<double>& p_grid,
                                             std::size_t grid, double crossover_tol = 1e-6) {
    for (double p : p_grid) {
        if (!(p >= 0.0 && p <= 1.0)) detail::domain_fail("expected_distortion_frontier", "p outside [0,1]");
    }
    const FamilySweeps sweeps(ch, grid);
    Frontier out;
    out.rows.resize(p_grid.size());
    for (std::size_t k = 0; k < p_grid.size(); ++k) {
        auto& row = out.rows[k];
        row.p = p_grid[k];
        const auto at_p = ch.with_p(row.p);
        for (std::size_t f = 0; f < kFrontierFamilies.size(); ++f) {
            const auto [v, i] = sweeps.best(f, row.p);
            row.family_min[f] = v;
            row.family_arg[f] = detail::finish(at_p, sweeps.evaluations(f)[i]);
        }
        const std::size_t bf = detail::best_family(sweeps, row.p);
        row.best = kFrontierFamilies[bf];
        row.best_expected = row.family_min[bf];
    }

    std::vector<double> sorted = p_grid;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t k = 1; k < sorted.size(); ++k) {
        const std::size_t fa = detail::best_family(sweeps, sorted[k - 1]);
        const std::size_t fb = detail::best_family(sweeps, sorted[k]);
        if (fa == fb) continue;
        auto diff = [&](double p) { return sweeps.best(fa, p).first - sweeps.best(fb, p).first; };
        double x;
        try {
            x = find_root(diff, sorted[k - 1], sorted[k], crossover_tol);
        } catch (const BracketError&) {
            // Ties at a grid point: report the upper endpoint.
            x = sorted[k];
        }
        out.crossovers.push_back({x, kFrontierFamilies[fa], kFrontierFamilies[fb]});
    }
    return out;
}

struct InterfaceSeries {
    BssScheme scheme;
    /// Every evaluated point, re-weighted at the requested p.
    std::vector<SchemeEvaluation> points;
    /// Lower staircases (K, min De at complexity <= K), K increasing.
    std::vector<std::pair<double, double>> kt_staircase;
    std::vector<std::pair<double, double>> kr_staircase;
};

namespace detail {

inline std::vector<std::pair<double, double>> lower_staircase(std::vector<std::pair<double, double>> kd) {
    std::sort(kd.begin(), kd.end());
    std::vector<std::pair<double, double>> out;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [k, d] : kd) {
        if (d < best) {
            best = d;
            out.emplace_back(k, d);
        }
    }
    return out;
}

}  // namespace detail

/// Complexity/expected-distortion tradeoff for each family at state probability p.
inline std::vector<InterfaceSeries> interface_tradeoff(const CompositeBsc& ch, double p, std::size_t grid) {
    const auto at_p = ch.with_p(p);
    std::vector<InterfaceSeries> out;
    for (BssScheme fam : {BssScheme::Broadcast, BssScheme::ResidueSplitting, BssScheme::SystematicGood,
                          BssScheme::SystematicBad}) {
        InterfaceSeries s;
        s.scheme = fam;
        s.points = scheme_sweep(at_p, fam, grid);
        std::vector<std::pair<double, double>> kt, kr;
        for (const auto& e : s.points) {
            kt.emplace_back(e.kt, e.expected);
            kr.emplace_back(e.kr, e.expected);
        }
        s.kt_staircase = detail::lower_staircase(std::move(kt));
        s.kr_staircase = detail::lower_staircase(std::move(kr));
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace composite
