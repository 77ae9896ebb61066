#pragma once

// Scalar root finding, minimization and quadrature.
//
// Everything here is templated on the callable so lambdas inline; all
// routines are pure and reentrant.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "composite/errors.hpp"

namespace composite {

inline constexpr double kDefaultTol = 1e-12;

/// Bisection on a sign-changing bracket. Returns a point whose bracket width
/// is at most `tol` (or that has reached double resolution).
template <class F>
double find_root(F&& f, double lo, double hi, double tol = kDefaultTol) {
    if (!(lo < hi)) {
        detail::domain_fail("find_root", "require lo < hi");
    }
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi)) {
        std::ostringstream msg;
        msg << "find_root: f(" << lo << ")=" << flo << " and f(" << hi << ")=" << fhi
            << " have the same sign";
        throw BracketError(msg.str());
    }
    for (int it = 0; it < 2000 && hi - lo > tol; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return lo + 0.5 * (hi - lo);
}

struct ScalarMinimum {
    double argmin = 0.0;
    double min = 0.0;
};

/// Grid scan with `scan_points` intervals to bracket the global minimum, then
/// golden-section refinement inside the neighbouring cells.
template <class F>
ScalarMinimum minimize_scalar(F&& f, double lo, double hi, double tol = 1e-10,
                              std::size_t scan_points = 1024) {
    if (!(lo < hi)) {
        detail::domain_fail("minimize_scalar", "require lo < hi");
    }
    scan_points = std::max<std::size_t>(scan_points, 1024);
    const double step = (hi - lo) / static_cast<double>(scan_points);
    ScalarMinimum best{lo, f(lo)};
    std::size_t best_i = 0;
    for (std::size_t i = 1; i <= scan_points; ++i) {
        const double x = (i == scan_points) ? hi : lo + step * static_cast<double>(i);
        const double v = f(x);
        if (v < best.min) {
            best = {x, v};
            best_i = i;
        }
    }

    double a = (best_i == 0) ? lo : lo + step * static_cast<double>(best_i - 1);
    double b = (best_i == scan_points) ? hi : lo + step * static_cast<double>(best_i + 1);

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 500 && (b - a) > tol; ++it) {
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
    const double x = 0.5 * (a + b);
    const double fx = f(x);
    for (auto [px, pv] : {std::pair{x, fx}, std::pair{c, fc}, std::pair{d, fd}}) {
        if (pv < best.min) best = {px, pv};
    }
    return best;
}

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    std::size_t max_evals = 20'000'000;
    int max_depth = 60;
};

namespace detail {

template <class F>
class AdaptiveSimpson {
public:
    AdaptiveSimpson(F& f, const QuadratureOptions& opt) : f_(f), opt_(opt) {}

    double run(double a, double b) {
        // Coarse pass over 16 panels fixes the error budget.
        constexpr int kPanels = 16;
        double xs[2 * kPanels + 1];
        double fs[2 * kPanels + 1];
        for (int i = 0; i <= 2 * kPanels; ++i) {
            xs[i] = a + (b - a) * static_cast<double>(i) / (2.0 * kPanels);
            fs[i] = eval(xs[i]);
        }
        double coarse = 0.0;
        for (int p = 0; p < kPanels; ++p) {
            coarse += simpson(xs[2 * p], xs[2 * p + 2], fs[2 * p], fs[2 * p + 1], fs[2 * p + 2]);
        }
        double eps = std::max(opt_.abs_tol, opt_.rel_tol * std::abs(coarse));
        if (eps == 0.0) eps = opt_.rel_tol;
        const double panel_eps = eps / kPanels;
        double total = 0.0;
        for (int p = 0; p < kPanels; ++p) {
            const double whole =
                simpson(xs[2 * p], xs[2 * p + 2], fs[2 * p], fs[2 * p + 1], fs[2 * p + 2]);
            total += recurse(xs[2 * p], xs[2 * p + 2], fs[2 * p], fs[2 * p + 1], fs[2 * p + 2],
                             whole, panel_eps, 0);
        }
        return total;
    }

private:
    static double simpson(double a, double b, double fa, double fm, double fb) {
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }

    double eval(double x) {
        if (++evals_ > opt_.max_evals) {
            throw NonConvergenceError("integrate: evaluation budget exhausted");
        }
        const double v = f_(x);
        if (!std::isfinite(v)) {
            throw NonConvergenceError("integrate: non-finite integrand at x=" + std::to_string(x));
        }
        return v;
    }

    double recurse(double a, double b, double fa, double fm, double fb, double whole, double eps,
                   int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double left = simpson(a, m, fa, flm, fm);
        const double right = simpson(m, b, fm, frm, fb);
        const double delta = left + right - whole;
        if (depth >= 2 && std::abs(delta) <= 15.0 * eps) {
            return left + right + delta / 15.0;
        }
        if (depth >= opt_.max_depth || lm <= a || rm >= b) {
            throw NonConvergenceError("integrate: subdivision depth exhausted near x=" +
                                      std::to_string(m));
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
    }

    F& f_;
    QuadratureOptions opt_;
    std::size_t evals_ = 0;
};

}  // namespace detail

/// Adaptive Simpson quadrature. `b` may be +infinity, in which case the
/// substitution t = a + u/(1-u) maps the range onto [0, 1).
template <class F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opt) {
    if (std::isnan(a) || std::isnan(b) || std::isinf(a)) {
        detail::domain_fail("integrate", "lower limit must be finite");
    }
    if (a == b) return 0.0;
    if (b < a) return -integrate(f, b, a, opt);
    if (std::isinf(b)) {
        auto mapped = [&](double u) {
            if (u >= 1.0) return 0.0;
            const double one_minus = 1.0 - u;
            const double t = a + u / one_minus;
            const double v = f(t);
            if (v == 0.0) return 0.0;
            return v / (one_minus * one_minus);
        };
        detail::AdaptiveSimpson<decltype(mapped)> engine(mapped, opt);
        return engine.run(0.0, 1.0);
    }
    detail::AdaptiveSimpson<F> engine(f, opt);
    return engine.run(a, b);
}

template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-10) {
    QuadratureOptions opt;
    opt.rel_tol = tol;
    return integrate(std::forward<F>(f), a, b, opt);
}

}  // namespace composite
