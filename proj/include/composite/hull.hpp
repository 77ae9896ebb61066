#pragma once

// Lower-left convex hull of achievable (D1, D2) pairs. Time sharing between
// two achievable pairs is achievable, and any pair dominated by an achievable
// pair is achievable, so the region is everything above-right of the hull.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace composite {

struct DistortionPair {
    double d1 = 0.0;
    double d2 = 0.0;

    friend bool operator==(const DistortionPair&, const DistortionPair&) = default;
};

/// Vertices of the lower-left convex hull, sorted by increasing D1 (and
/// therefore strictly decreasing D2). Ties in D1 keep the smaller D2.
inline std::vector<DistortionPair> pareto_lower_hull(std::span<const DistortionPair> points) {
    std::vector<DistortionPair> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end(), [](const DistortionPair& a, const DistortionPair& b) {
        return a.d1 < b.d1 || (a.d1 == b.d1 && a.d2 < b.d2);
    });

    std::vector<DistortionPair> front;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (const auto& p : sorted) {
        if (p.d2 < best_d2) {
            front.push_back(p);
            best_d2 = p.d2;
        }
    }

    auto cross = [](const DistortionPair& o, const DistortionPair& a, const DistortionPair& b) {
        return (a.d1 - o.d1) * (b.d2 - o.d2) - (a.d2 - o.d2) * (b.d1 - o.d1);
    };
    std::vector<DistortionPair> hull;
    for (const auto& p : front) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0.0) {
            hull.pop_back();
        }
        hull.push_back(p);
    }
    return hull;
}

/// Lowest achievable D2 at a given D1 on the region bounded by `hull`;
/// +infinity left of the hull.
inline double hull_d2_at(std::span<const DistortionPair> hull, double d1) {
    if (hull.empty() || d1 < hull.front().d1) return std::numeric_limits<double>::infinity();
    if (d1 >= hull.back().d1) return hull.back().d2;
    auto it = std::upper_bound(hull.begin(), hull.end(), d1,
                               [](double x, const DistortionPair& p) { return x < p.d1; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (d1 - lo.d1) / (hi.d1 - lo.d1);
    return lo.d2 + t * (hi.d2 - lo.d2);
}

/// Lowest achievable D1 at a given D2; +infinity below the hull.
inline double hull_d1_at(std::span<const DistortionPair> hull, double d2) {
    if (hull.empty() || d2 < hull.back().d2) return std::numeric_limits<double>::infinity();
    if (d2 >= hull.front().d2) return hull.front().d1;
    // D2 decreases along the hull.
    auto it = std::upper_bound(hull.begin(), hull.end(), d2,
                               [](double y, const DistortionPair& p) { return y > p.d2; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (lo.d2 - d2) / (lo.d2 - hi.d2);
    return lo.d1 + t * (hi.d1 - lo.d1);
}

/// How far `p` lies outside the region bounded by `hull`: the larger of the
/// gaps to the boundary measured along each axis. Nonpositive means inside.
inline double hull_excess(std::span<const DistortionPair> hull, DistortionPair p) {
    const double by_d2 = hull_d2_at(hull, p.d1) - p.d2;
    const double by_d1 = hull_d1_at(hull, p.d2) - p.d1;
    return std::max(by_d1, by_d2);
}

/// min over the hull of (1-p) D1 + p D2.
inline double hull_min_expected(std::span<const DistortionPair> hull, double p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : hull) best = std::min(best, (1.0 - p) * v.d1 + p * v.d2);
    return best;
}

}  // namespace composite
