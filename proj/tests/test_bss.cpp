#include <algorithm>
#include <cmath>
#include <random>

#include "catch_amalgamated.hpp"
#include "composite/bss.hpp"

using namespace composite;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const CompositeBsc kPaper(0.25, 0.45, 0.5, 2.0);

}  // namespace

// Reference values computed with mpmath at 40 digits, with the turning point
// found from a numerically differentiated g.

TEST_CASE("single-layer endpoints", "[bss]") {
    const auto sh = shannon_scheme(kPaper);
    CHECK_THAT(sh.d1, WithinAbs(0.42934858893207407, 1e-13));
    CHECK_THAT(sh.d2, WithinAbs(0.42934858893207407, 1e-13));
    const auto out = outage_scheme(kPaper);
    CHECK_THAT(out.d1, WithinAbs(0.15514048389692457, 1e-13));
    CHECK(out.d2 == 0.5);
    CHECK_THAT(out.expected, WithinAbs(0.5 * (0.15514048389692457 + 0.5), 1e-13));
}

TEST_CASE("broadcast scheme", "[bss]") {
    const auto e = broadcast_scheme(kPaper, 0.1);
    CHECK_THAT(e.d1, WithinAbs(0.27656735795088725, 1e-12));
    CHECK_THAT(e.d2, WithinAbs(0.44346173897636023, 1e-12));
    CHECK_THAT(e.kt, WithinAbs(2.0 * 0.074634335951333994, 1e-13));
    CHECK(e.kr <= e.kt);
    for (int i = 0; i <= 50; ++i) {
        const auto s = broadcast_scheme(kPaper, 0.01 * i);
        REQUIRE(s.d1 <= s.d2 + 1e-12);
        REQUIRE(s.kr <= s.kt + 1e-15);
    }
}

TEST_CASE("Wyner-Ziv turning point", "[bss]") {
    const WynerZivCurve w1(0.25);
    CHECK_THAT(w1.dc(), WithinAbs(0.088020701109512551, 1e-10));
    CHECK_THAT(w1.g(w1.dc()), WithinAbs(0.44401704916404742, 1e-10));
    CHECK_THAT(w1.g_prime(w1.dc()), WithinRel(-2.7411962652353670, 1e-8));
    const WynerZivCurve w2(0.45);
    CHECK_THAT(w2.dc(), WithinAbs(0.40067221412983795, 1e-10));
    CHECK_THAT(w2.g(w2.dc()), WithinAbs(0.028372851813102887, 1e-10));
    CHECK_THAT(w2.g_prime(w2.dc()), WithinRel(-0.57519005389344632, 1e-8));
    CHECK_THROWS_AS(WynerZivCurve(0.5), DomainError);
}

TEST_CASE("Wyner-Ziv derivative matches finite differences", "[bss][property]") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> a(0.02, 0.48), t(0.05, 0.95);
    for (int i = 0; i < 200; ++i) {
        const double alpha = a(gen);
        const double d = t(gen) * alpha;
        const double h = 1e-6 * alpha;
        const double fd = (WynerZivCurve::g(d + h, alpha) - WynerZivCurve::g(d - h, alpha)) / (2 * h);
        REQUIRE_THAT(WynerZivCurve::g_prime(d, alpha), WithinAbs(fd, 1e-6 * (1 + std::abs(fd))));
    }
}

TEST_CASE("Wyner-Ziv curve shape", "[bss]") {
    for (double alpha : {0.1, 0.25, 0.45}) {
        const WynerZivCurve wz(alpha);
        const double dc = wz.dc();
        // Tangency: the line through (alpha, 0) touches g at dc.
        CHECK_THAT(wz.g(dc), WithinAbs(wz.g_prime(dc) * (dc - alpha), 1e-8));
        CHECK_THAT(wz.rate(dc * (1 - 1e-13)), WithinAbs(wz.rate(dc * (1 + 1e-13)), 1e-9));
        CHECK(wz.rate(alpha) == 0.0);
        CHECK_THAT(wz.rate(0.0), WithinAbs(binary_entropy(alpha), 1e-15));
        std::vector<double> r(1000);
        for (int i = 0; i < 1000; ++i) r[i] = wz.rate(alpha * i / 999.0);
        for (int i = 1; i < 999; ++i) {
            REQUIRE(r[i - 1] - 2 * r[i] + r[i + 1] >= -1e-12);
            REQUIRE(r[i] <= r[i - 1]);
        }
        for (double d : {0.1 * alpha, 0.5 * dc, dc, 0.5 * (dc + alpha), 0.99 * alpha}) {
            REQUIRE_THAT(wz.distortion(wz.rate(d)), WithinAbs(d, 1e-10));
        }
    }
    // Below the turning point for alpha = 0.25 the linear segment applies.
    CHECK_THAT(wyner_ziv_rate(0.1, 0.25), WithinAbs(2.7411962652353670 * 0.15, 1e-8));
}

TEST_CASE("systematic schemes", "[bss]") {
    const auto good = systematic_scheme_good(kPaper);
    CHECK_THAT(good.d1, WithinAbs(0.18115346101470668, 1e-10));
    CHECK(good.d2 == 0.45);
    CHECK_THAT(good.kt, WithinAbs(1.1887218755408671, 1e-13));
    CHECK_THAT(good.param("dc"), WithinAbs(0.088020701109512551, 1e-10));
    const auto bad = systematic_scheme_bad(kPaper);
    CHECK_THAT(bad.d2, WithinAbs(0.43743798512633837, 1e-10));
    CHECK_THAT(bad.d1, WithinAbs(0.25, 1e-15));
    CHECK_THAT(bad.kt, WithinAbs(1.0072255460121917, 1e-13));
}

TEST_CASE("residue splitting", "[bss]") {
    for (double beta : {0.0, 0.1, 0.3, 0.5}) {
        const auto rs = residue_splitting_scheme(kPaper, beta, 0.0);
        const auto bc = broadcast_scheme(kPaper, beta);
        CHECK(rs.d1 == bc.d1);
        CHECK(rs.d2 == bc.d2);
        CHECK(rs.scheme == BssScheme::ResidueSplitting);
        const auto near_one = residue_splitting_scheme(kPaper, beta, 1.0 - 1e-9);
        const auto one = residue_splitting_scheme(kPaper, beta, 1.0);
        CHECK_THAT(near_one.d1, WithinAbs(one.d1, 1e-6));
        CHECK_THAT(near_one.d2, WithinAbs(one.d2, 1e-6));
    }
    CHECK_THROWS_AS(residue_splitting_scheme(kPaper, 0.1, 1.5), DomainError);
    for (std::size_t i = 0; i < 21; ++i) {
        for (std::size_t j = 0; j < 21; ++j) {
            const auto e = residue_splitting_scheme(kPaper, sweep_beta(i, 21), sweep_rho(j, 21));
            REQUIRE(e.d1 <= e.d2 + 1e-12);
            REQUIRE(e.d1 >= 0.0);
            REQUIRE(e.d2 <= 0.5);
        }
    }
}

TEST_CASE("region inclusion", "[bss]") {
    const auto rs_hull = distortion_region(kPaper, BssScheme::ResidueSplitting, 101);
    const auto bc_hull = distortion_region(kPaper, BssScheme::Broadcast, 101);
    for (const auto& p : bc_hull) CHECK(hull_excess(rs_hull, p) <= 1e-12);
    CHECK(hull_excess(rs_hull, systematic_scheme_good(kPaper).pair()) >= 1e-4);
    CHECK(hull_excess(rs_hull, systematic_scheme_bad(kPaper).pair()) >= 1e-4);
    // Hull endpoints are the single-layer schemes.
    CHECK_THAT(rs_hull.front().d1, WithinAbs(outage_scheme(kPaper).d1, 1e-12));
    CHECK_THAT(rs_hull.back().d2, WithinAbs(shannon_scheme(kPaper).d2, 1e-12));
}

TEST_CASE("expected distortion frontier", "[bss]") {
    std::vector<double> ps;
    for (int i = 0; i <= 100; ++i) ps.push_back(i / 100.0);
    const auto fr = expected_distortion_frontier(kPaper, ps, 201);
    REQUIRE(fr.crossovers.size() == 3);
    CHECK_THAT(fr.crossovers[0].p, WithinAbs(0.378, 0.005));
    CHECK_THAT(fr.crossovers[1].p, WithinAbs(0.845, 0.005));
    CHECK_THAT(fr.crossovers[2].p, WithinAbs(0.956, 0.005));
    CHECK(fr.crossovers[0].below == BssScheme::ResidueSplitting);
    CHECK(fr.crossovers[0].above == BssScheme::SystematicGood);
    CHECK(fr.crossovers[1].above == BssScheme::SystematicBad);
    CHECK(fr.crossovers[2].above == BssScheme::ResidueSplitting);
    // Family slots follow kFrontierFamilies: RS, BC, SG, SB.
    for (const auto& r : fr.rows) {
        REQUIRE(r.family_min[0] <= r.family_min[1] + 1e-15);
        REQUIRE(r.best_expected == *std::min_element(r.family_min.begin(), r.family_min.end()));
    }
    const double mid = fr.rows[50].family_min[2];
    CHECK_THAT(mid, WithinAbs(0.5 * (fr.rows[0].family_min[2] + fr.rows[100].family_min[2]), 1e-12));
}

TEST_CASE("interface tradeoff at p = 0.7", "[bss]") {
    const auto series = interface_tradeoff(kPaper, 0.7, 101);
    double best_de = 1.0, best_kt = 0.0;
    BssScheme argde = BssScheme::Broadcast, argkt = BssScheme::Broadcast;
    for (const auto& s : series) {
        for (const auto& e : s.points) {
            if (e.expected < best_de) best_de = e.expected, argde = e.scheme;
            if (e.kt > best_kt) best_kt = e.kt, argkt = e.scheme;
        }
        for (std::size_t i = 1; i < s.kt_staircase.size(); ++i) {
            REQUIRE(s.kt_staircase[i].first > s.kt_staircase[i - 1].first);
            REQUIRE(s.kt_staircase[i].second < s.kt_staircase[i - 1].second);
        }
    }
    CHECK(argde == BssScheme::SystematicGood);
    CHECK(argkt == BssScheme::SystematicGood);

    auto bc = series[0].points;
    REQUIRE(series[0].scheme == BssScheme::Broadcast);
    std::sort(bc.begin(), bc.end(), [](const auto& a, const auto& b) { return a.kt < b.kt; });
    bool up = false, down = false;
    for (std::size_t i = 1; i < bc.size(); ++i) {
        REQUIRE(bc[i].kr <= bc[i].kt + 1e-15);
        if (bc[i].expected > bc[i - 1].expected + 1e-12) up = true;
        if (bc[i].expected < bc[i - 1].expected - 1e-12) down = true;
    }
    CHECK(up);
    CHECK(down);
}

TEST_CASE("tangent from (alpha, 0) stays below g", "[bss]") {
    for (double alpha : {0.25, 0.45}) {
        const WynerZivCurve wz(alpha);
        const double slope = wz.g_prime(wz.dc());
        for (int i = 0; i < 1000; ++i) {
            const double d = alpha * i / 1000.0;
            REQUIRE(slope * (d - alpha) <= wz.g(d) + 1e-12);
        }
    }
}
