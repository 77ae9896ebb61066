#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "catch_amalgamated.hpp"
#include "composite/hull.hpp"
#include "composite/numeric.hpp"
#include "composite/parallel.hpp"
#include "composite/types.hpp"

using namespace composite;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("bisection root finder", "[numeric]") {
    CHECK_THAT(find_root([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14), WithinAbs(std::sqrt(2.0), 1e-13));
    CHECK_THAT(find_root([](double x) { return std::cos(x); }, 0.0, 3.0), WithinAbs(std::numbers::pi / 2, 1e-11));
    CHECK(find_root([](double x) { return x; }, 0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), BracketError);
    CHECK_THROWS_AS(find_root([](double x) { return x; }, 1.0, -1.0), DomainError);
}

TEST_CASE("scalar minimizer finds the global minimum", "[numeric]") {
    auto m = minimize_scalar([](double x) { return (x - 0.3) * (x - 0.3); }, 0.0, 1.0);
    CHECK_THAT(m.argmin, WithinAbs(0.3, 1e-7));
    // Two wells; the deeper one is at 0.8.
    auto two = minimize_scalar([](double x) { return std::min(std::pow(x - 0.2, 2), std::pow(x - 0.8, 2) - 0.01); },
                               0.0, 1.0);
    CHECK_THAT(two.argmin, WithinAbs(0.8, 1e-7));
    auto edge = minimize_scalar([](double x) { return x; }, 0.0, 1.0);
    CHECK(edge.argmin == 0.0);
}

TEST_CASE("adaptive quadrature", "[numeric]") {
    CHECK_THAT(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12), WithinRel(2.0, 1e-11));
    CHECK_THAT(integrate([](double x) { return std::exp(-x); }, 0.0, std::numeric_limits<double>::infinity(), 1e-12),
               WithinRel(1.0, 1e-11));
    CHECK_THAT(integrate([](double x) { return x; }, 1.0, 0.0), WithinAbs(-0.5, 1e-14));
    CHECK(integrate([](double x) { return x; }, 2.0, 2.0) == 0.0);
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0), NonConvergenceError);
    QuadratureOptions tight;
    tight.max_evals = 10;
    CHECK_THROWS_AS(integrate([](double x) { return std::sin(50 * x); }, 0.0, 3.0, tight), NonConvergenceError);
}

TEST_CASE("polynomials integrate exactly", "[numeric][property]") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const double c0 = u(gen), c1 = u(gen), c2 = u(gen), c3 = u(gen);
        const double a = u(gen), b = a + std::abs(u(gen)) + 0.1;
        auto f = [&](double x) { return c0 + x * (c1 + x * (c2 + x * c3)); };
        auto F = [&](double x) { return x * (c0 + x * (c1 / 2 + x * (c2 / 3 + x * c3 / 4))); };
        QuadratureOptions opt;
        opt.abs_tol = 1e-12;
        REQUIRE_THAT(integrate(f, a, b, opt), WithinAbs(F(b) - F(a), 1e-10));
    }
}

TEST_CASE("validated value types", "[numeric]") {
    CHECK(Probability(0.3).value() == 0.3);
    CHECK_THROWS_AS(Probability(1.1), DomainError);
    CHECK_THROWS_AS(Probability(std::nan("")), DomainError);
    CHECK_THROWS_AS(BitsRate(-1.0), DomainError);
    CHECK_THROWS_AS(NatsRate(std::numeric_limits<double>::infinity()), DomainError);
    CHECK_THAT(to_bits(NatsRate(std::log(2.0))).value(), WithinAbs(1.0, 1e-15));
    CHECK_THAT(to_nats(BitsRate(1.0)).value(), WithinAbs(std::log(2.0), 1e-15));
}

TEST_CASE("lower convex hull", "[hull]") {
    std::vector<DistortionPair> pts = {{0.1, 0.9}, {0.5, 0.5}, {0.9, 0.1}, {0.4, 0.4}, {0.6, 0.8}, {0.3, 0.95}};
    const auto hull = pareto_lower_hull(pts);
    REQUIRE(hull.size() == 3);
    CHECK(hull[0] == DistortionPair{0.1, 0.9});
    CHECK(hull[1] == DistortionPair{0.4, 0.4});
    CHECK(hull[2] == DistortionPair{0.9, 0.1});
    CHECK(std::isinf(hull_d2_at(hull, 0.05)));
    CHECK_THAT(hull_d2_at(hull, 0.25), WithinAbs(0.65, 1e-15));
    CHECK_THAT(hull_d2_at(hull, 1.0), WithinAbs(0.1, 1e-15));
    CHECK(hull_excess(hull, {0.1, 0.9}) == 0.0);
    CHECK(hull_excess(hull, {0.5, 0.5}) < 0.0);
    CHECK(hull_excess(hull, {0.3, 0.3}) > 0.0);
    CHECK_THAT(hull_min_expected(hull, 0.5), WithinAbs(0.4, 1e-15));
}

TEST_CASE("hull vertices are convex and dominate the input", "[hull][property]") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<DistortionPair> pts(200);
        for (auto& p : pts) p = {u(gen), u(gen)};
        const auto hull = pareto_lower_hull(pts);
        for (std::size_t i = 1; i < hull.size(); ++i) {
            REQUIRE(hull[i].d1 > hull[i - 1].d1);
            REQUIRE(hull[i].d2 < hull[i - 1].d2);
        }
        for (std::size_t i = 2; i < hull.size(); ++i) {
            const double s1 = (hull[i - 1].d2 - hull[i - 2].d2) / (hull[i - 1].d1 - hull[i - 2].d1);
            const double s2 = (hull[i].d2 - hull[i - 1].d2) / (hull[i].d1 - hull[i - 1].d1);
            REQUIRE(s2 > s1);
        }
        for (const auto& p : pts) REQUIRE(hull_excess(hull, p) <= 1e-12);
    }
}

TEST_CASE("parallel_for covers every index once", "[parallel]") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) REQUIRE(h == 1);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                        if (i == 7) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
}
